/*
 * Copyright 2026 The kerneldense Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "kdense/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>

#include "kdense/errors.hpp"

namespace kdense {
namespace {

double shape_value(const TargetShape& shape, double x) {
  if (const auto* ind = std::get_if<IndicatorInterval>(&shape)) {
    return (x >= ind->a && x <= ind->b) ? 1.0 : 0.0;
  }
  if (const auto* steps = std::get_if<StepCombination>(&shape)) {
    for (const Step& s : steps->steps) {
      if (x >= s.a && x <= s.b) return s.level;
    }
    return 0.0;
  }
  if (const auto* sign = std::get_if<Sign>(&shape)) return x >= sign->offset ? 1.0 : -1.0;
  const auto& sine = std::get<ContinuousSine>(shape);
  return std::sin(2.0 * std::numbers::pi * sine.frequency * x);
}

void check_interval(double a, double b, const Box& domain, const char* what) {
  if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
    throw InputError(std::string(what) + " needs finite endpoints with a <= b");
  }
  if (a < domain.lower(0) || b > domain.upper(0)) {
    throw InputError(std::string(what) + " leaves the domain");
  }
}

// Uniform nodes on [lo, hi] with `count` >= 2 points.
std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> nodes(count);
  const double h = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) nodes[i] = lo + h * static_cast<double>(i);
  nodes.back() = hi;
  return nodes;
}

double mean_of(const std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

ConvergenceCell run_cell(const StudyConfig& cfg, const RealFunction& target,
                         const std::vector<Jump>& jumps, std::size_t n, std::size_t replicate) {
  ConvergenceCell cell;
  cell.n = n;
  cell.replicate = replicate;
  const auto started = std::chrono::steady_clock::now();
  try {
    const Eigen::Index d = cfg.target.domain.dimension();
    const Kernel k = cfg.kernel.at(n, d);
    const RkhsFunction fit =
        fit_approximant(target, n, k, cfg.lambda.at(n), cfg.sampler, cfg.target.domain,
                        derive_seed(cfg.seed, n, replicate, "train"), cfg.label_noise);
    const RealFunction g = cfg.clip_bound ? clip(fit, *cfg.clip_bound) : fit.as_function();

    Rng eval_rng(derive_seed(cfg.seed, n, replicate, "eval"));
    const std::vector<Point> eval_pts =
        draw_points(cfg.sampler, cfg.target.domain, cfg.effective_eval_size(), eval_rng);
    const std::size_t m = eval_pts.size();
    std::vector<double> truth(m);
    std::vector<double> approx(m);
    std::vector<double> gaps(m);
    for (std::size_t j = 0; j < m; ++j) {
      truth[j] = target(eval_pts[j]);
      approx[j] = g(eval_pts[j]);
      gaps[j] = std::abs(truth[j] - approx[j]);
    }
    const PairedSample sample = PairedSample::uniform(gaps);
    cell.d_psi = d_psi(cfg.psi, sample);
    cell.ky_fan = ky_fan(sample);
    cell.l1_gap = mean_of(gaps);

    std::vector<double> labels = truth;
    if (cfg.label_noise > 0.0) {
      Rng noise_rng(derive_seed(cfg.seed, n, replicate, "eval-noise"));
      for (double& y : labels) y += cfg.label_noise * noise_rng.normal();
    }
    const LossFunction absolute = LossFunction::absolute();
    double risk_fit = 0.0;
    double risk_truth = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      risk_fit += absolute.value(labels[j], approx[j]);
      risk_truth += absolute.value(labels[j], truth[j]);
    }
    cell.risk_gap = std::abs(risk_fit / static_cast<double>(m) - risk_truth / static_cast<double>(m));
    cell.sup_gap = sup_gap_estimate(target, g, cfg.target.domain, cfg.grid_resolution, jumps);
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
  }
  if (cfg.record_timing) {
    cell.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return cell;
}

}  // namespace

void TargetFunction::validate() const {
  domain.validate();
  if (const auto* ind = std::get_if<IndicatorInterval>(&shape)) {
    check_interval(ind->a, ind->b, domain, "IndicatorInterval");
  } else if (const auto* steps = std::get_if<StepCombination>(&shape)) {
    if (steps->steps.empty()) throw InputError("StepCombination needs at least one interval");
    std::vector<Step> sorted = steps->steps;
    for (const Step& s : sorted) {
      check_interval(s.a, s.b, domain, "StepCombination interval");
      if (!std::isfinite(s.level)) throw InputError("StepCombination level must be finite");
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Step& l, const Step& r) { return l.a < r.a; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (!(sorted[i].a > sorted[i - 1].b)) {
        throw InputError("StepCombination intervals must be pairwise disjoint");
      }
    }
  } else if (const auto* sign = std::get_if<Sign>(&shape)) {
    if (!std::isfinite(sign->offset)) throw InputError("Sign offset must be finite");
  } else {
    const auto& sine = std::get<ContinuousSine>(shape);
    if (!std::isfinite(sine.frequency)) throw InputError("ContinuousSine frequency must be finite");
  }
}

std::vector<Jump> TargetFunction::jumps() const {
  const double lo = domain.lower(0);
  const double hi = domain.upper(0);
  std::vector<Jump> out;
  auto add = [&](double at, double magnitude) {
    if (at > lo && at < hi && magnitude != 0.0) out.push_back({at, std::abs(magnitude)});
  };
  if (const auto* ind = std::get_if<IndicatorInterval>(&shape)) {
    add(ind->a, 1.0);
    add(ind->b, 1.0);
  } else if (const auto* steps = std::get_if<StepCombination>(&shape)) {
    for (const Step& s : steps->steps) {
      add(s.a, s.level);
      add(s.b, s.level);
    }
  } else if (const auto* sign = std::get_if<Sign>(&shape)) {
    add(sign->offset, 2.0);
  }
  std::sort(out.begin(), out.end(),
            [](const Jump& l, const Jump& r) { return l.location < r.location; });
  return out;
}

RealFunction make_target(const TargetFunction& t) {
  t.validate();
  return [shape = t.shape, domain = t.domain](const Point& x) {
    if (!domain.contains(x)) throw InputError("target evaluated outside its domain");
    return shape_value(shape, x(0));
  };
}

double KernelSchedule::bandwidth(std::size_t n, Eigen::Index dimension) const {
  if (fixed) return *fixed;
  return scale * std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(dimension) + 2.0));
}

Kernel KernelSchedule::at(std::size_t n, Eigen::Index dimension) const {
  const double h = bandwidth(n, dimension);
  if (family == KernelFamily::kGaussian) return GaussianRbf(h);
  return WendlandC2(h);
}

void KernelSchedule::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InputError("kernel scale must be > 0");
  if (fixed && (!(*fixed > 0.0) || !std::isfinite(*fixed))) {
    throw InputError("kernel bandwidth must be > 0");
  }
}

double LambdaSchedule::at(std::size_t n) const {
  return scale / std::pow(static_cast<double>(n), exponent);
}

void LambdaSchedule::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InputError("lambda scale must be > 0");
  if (!(exponent >= 0.0) || !std::isfinite(exponent)) {
    throw InputError("lambda exponent must be >= 0 so that lambda(n) is nonincreasing");
  }
}

std::size_t StudyConfig::effective_eval_size() const {
  if (eval_sample_size > 0) return eval_sample_size;
  return 10 * *std::max_element(sample_sizes.begin(), sample_sizes.end());
}

void StudyConfig::validate() const {
  target.validate();
  kernel.validate();
  lambda.validate();
  if (sample_sizes.empty()) throw InputError("sample_sizes must not be empty");
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] < 1) throw InputError("sample_sizes entries must be >= 1");
    if (i > 0 && !(sample_sizes[i] > sample_sizes[i - 1])) {
      throw InputError("sample_sizes must be strictly increasing");
    }
  }
  if (replicates < 1) throw InputError("replicates must be >= 1");
  if (grid_resolution < 2) throw InputError("grid_resolution must be >= 2");
  if (!(label_noise >= 0.0) || !std::isfinite(label_noise)) {
    throw InputError("label_noise must be >= 0");
  }
  if (clip_bound && !(*clip_bound > 0.0)) throw InputError("clip_bound must be > 0");
  if (const auto* g = std::get_if<TruncatedGaussianSampler>(&sampler)) {
    if (!(g->sd > 0.0)) throw InputError("sampler_sd must be > 0");
  }
}

bool ConvergenceReport::partial() const {
  return std::any_of(cells.begin(), cells.end(), [](const ConvergenceCell& c) { return !c.ok; });
}

RkhsFunction fit_approximant(const RealFunction& target, std::size_t n, const Kernel& k,
                             double lambda, const Sampler& sampler, const Box& domain,
                             std::uint64_t seed, double label_noise) {
  if (n < 1) throw InputError("fit_approximant needs n >= 1");
  Rng rng(seed);
  std::vector<Point> xs = draw_points(sampler, domain, n, rng);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = target(xs[i]);
  if (label_noise > 0.0) {
    Rng noise(seed ^ 0x6e6f697365ULL);
    for (double& y : ys) y += label_noise * noise.normal();
  }
  return fit_kernel_ridge(Dataset(std::move(xs), std::move(ys)), k, lambda);
}

double sup_gap_estimate(const RealFunction& f, const RealFunction& g, const Box& domain,
                        std::size_t grid_resolution, const std::vector<Jump>& jumps) {
  domain.validate();
  if (grid_resolution < 2) throw InputError("grid_resolution must be >= 2");
  const Eigen::Index d = domain.dimension();
  const std::size_t per_axis =
      d == 1 ? grid_resolution
             : std::max<std::size_t>(
                   2, static_cast<std::size_t>(std::floor(
                          std::pow(static_cast<double>(grid_resolution), 1.0 / static_cast<double>(d)) +
                          1e-9)));

  std::vector<std::vector<double>> axes(static_cast<std::size_t>(d));
  for (Eigen::Index c = 0; c < d; ++c) {
    axes[c] = linspace(domain.lower(c), domain.upper(c), per_axis);
  }
  const double spacing =
      (domain.upper(0) - domain.lower(0)) / static_cast<double>(per_axis - 1);
  for (const Jump& j : jumps) {
    for (double at : {j.location - spacing, j.location, j.location + spacing}) {
      if (at >= domain.lower(0) && at <= domain.upper(0)) axes[0].push_back(at);
    }
  }
  std::sort(axes[0].begin(), axes[0].end());
  axes[0].erase(std::unique(axes[0].begin(), axes[0].end()), axes[0].end());

  double worst = 0.0;
  std::vector<std::size_t> index(static_cast<std::size_t>(d), 0);
  Point x(d);
  while (true) {
    for (Eigen::Index c = 0; c < d; ++c) x(c) = axes[c][index[c]];
    worst = std::max(worst, std::abs(f(x) - g(x)));
    Eigen::Index c = 0;
    while (c < d && ++index[c] == axes[c].size()) {
      index[c] = 0;
      ++c;
    }
    if (c == d) break;
  }
  return worst;
}

ConvergenceReport run_study(const StudyConfig& cfg) {
  cfg.validate();
  const RealFunction target = make_target(cfg.target);
  const std::vector<Jump> jumps = cfg.target.jumps();

  struct Task {
    std::size_t n;
    std::size_t replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t n : cfg.sample_sizes) {
    for (std::size_t r = 0; r < cfg.replicates; ++r) tasks.push_back({n, r});
  }
  ConvergenceReport report;
  report.cells.resize(tasks.size());

  std::size_t workers = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
  workers = std::clamp<std::size_t>(workers, 1, tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      report.cells[i] = run_cell(cfg, target, jumps, tasks[i].n, tasks[i].replicate);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return report;
}

RiskCheck risk_convergence_check(const ConvergenceReport& report, double lipschitz_constant) {
  RiskCheck check;
  bool first = true;
  for (const ConvergenceCell& c : report.cells) {
    if (!c.ok) continue;
    const double margin = lipschitz_constant * c.l1_gap + 1e-10 - c.risk_gap;
    check.worst_margin = first ? margin : std::min(check.worst_margin, margin);
    first = false;
    ++check.cells_checked;
    if (margin < 0.0) check.passed = false;
  }
  return check;
}

SeparationCheck separation_check(const ConvergenceReport& report, double smallest_jump) {
  SeparationCheck check;
  check.threshold = 0.45 * smallest_jump;
  std::map<std::size_t, std::vector<const ConvergenceCell*>> by_replicate;
  bool any = false;
  for (const ConvergenceCell& c : report.cells) {
    if (!c.ok) {
      check.weak_converges = false;
      check.strong_bounded = false;
      continue;
    }
    by_replicate[c.replicate].push_back(&c);
    check.min_sup_gap = any ? std::min(check.min_sup_gap, c.sup_gap) : c.sup_gap;
    any = true;
  }
  for (auto& [replicate, cells] : by_replicate) {
    std::sort(cells.begin(), cells.end(), [](auto* l, auto* r) { return l->n < r->n; });
    if (!(cells.back()->d_psi < cells.front()->d_psi)) check.weak_converges = false;
  }
  if (!any || check.min_sup_gap < check.threshold) check.strong_bounded = false;
  return check;
}

std::vector<SizeSummary> summarize_by_size(const ConvergenceReport& report) {
  std::map<std::size_t, SizeSummary> acc;
  for (const ConvergenceCell& c : report.cells) {
    SizeSummary& s = acc[c.n];
    s.n = c.n;
    if (!c.ok) continue;
    ++s.cells;
    s.mean_d_psi += c.d_psi;
    s.mean_ky_fan += c.ky_fan;
    s.mean_sup_gap += c.sup_gap;
    s.mean_l1_gap += c.l1_gap;
    s.mean_risk_gap += c.risk_gap;
  }
  std::vector<SizeSummary> out;
  for (auto& [n, s] : acc) {
    if (s.cells > 0) {
      const auto k = static_cast<double>(s.cells);
      s.mean_d_psi /= k;
      s.mean_ky_fan /= k;
      s.mean_sup_gap /= k;
      s.mean_l1_gap /= k;
      s.mean_risk_gap /= k;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace kdense
