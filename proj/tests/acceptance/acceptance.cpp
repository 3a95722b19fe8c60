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

// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "kdense/cli/app.hpp"
#include "kdense/cli/config.hpp"
#include "kdense/cli/report_io.hpp"
#include "kdense/erm.hpp"
#include "kdense/errors.hpp"
#include "kdense/kernels.hpp"
#include "kdense/lab.hpp"
#include "kdense/prob_metrics.hpp"
#include "kdense/rkhs.hpp"
#include "kdense/spectral.hpp"
#include "oracles.hpp"

using namespace kdense;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

using Criterion = std::function<void(Outcome&)>;

std::vector<Point> random_points(std::mt19937_64& g, std::size_t n, int d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    Point p(d);
    for (int j = 0; j < d; ++j) p(j) = u(g);
    pts.push_back(p);
  }
  return pts;
}

RealFunction table(const std::vector<double>& v) {
  return [&v](const Point& x) { return v[static_cast<std::size_t>(x(0))]; };
}

void metric_axioms(Outcome& o) {
  std::mt19937_64 g(101);
  std::normal_distribution<double> nd(0.0, 1.5);
  std::vector<Point> pts;
  for (int j = 0; j < 500; ++j) pts.push_back(make_point({static_cast<double>(j)}));
  const auto w = uniform_weights(pts.size());
  std::size_t sym = 0, tri = 0;
  double worst = -1e300;
  std::vector<double> a(500), b(500), c(500);
  for (int t = 0; t < 1000; ++t) {
    for (int j = 0; j < 500; ++j) {
      a[j] = nd(g);
      b[j] = t % 2 ? a[j] + 0.01 * nd(g) : nd(g);
      c[j] = nd(g);
    }
    const auto fa = table(a), fb = table(b), fc = table(c);
    for (const PsiFunction& psi : {PsiFunction(Psi1{}), PsiFunction(Psi2{})}) {
      const double ab = d_psi(psi, paired_sample(fa, fb, pts, w));
      const double ba = d_psi(psi, paired_sample(fb, fa, pts, w));
      const double bc = d_psi(psi, paired_sample(fb, fc, pts, w));
      const double ac = d_psi(psi, paired_sample(fa, fc, pts, w));
      sym += ab != ba;
      tri += ac > ab + bc + 1e-12;
      worst = std::max(worst, ac - ab - bc);
    }
  }
  o.pass = sym == 0 && tri == 0;
  o.detail << "2000 checks, symmetry violations " << sym << ", triangle violations " << tri
           << ", max(d_ac - d_ab - d_bc) = " << worst;
}

void convergence_equivalence(Outcome& o) {
  // Midpoint grid of 10000 points: U_n = [0, 1/n) holds exactly 10000/n.
  const std::size_t m = 10000;
  std::vector<Point> pts;
  for (std::size_t j = 0; j < m; ++j) pts.push_back(make_point({(j + 0.5) / m}));
  const auto w = uniform_weights(m);
  const RealFunction f = [](const Point& x) { return std::sin(6.0 * x(0)); };
  const RealFunction off = [&](const Point& x) { return f(x) + 1.0; };
  const auto so = paired_sample(off, f, pts, w);
  const double d_off = d_psi(Psi2{}, so);
  const double k_off = ky_fan(so);
  bool ok = std::abs(d_off - 1.0) <= 1e-12 && std::abs(k_off - 1.0) <= 1e-12;
  for (int n : {10, 100, 1000}) {
    const RealFunction fn = [&](const Point& x) { return f(x) + (x(0) < 1.0 / n ? 1.0 : 0.0); };
    const auto s = paired_sample(fn, f, pts, w);
    const double dp = d_psi(Psi2{}, s);
    const double kf = ky_fan(s);
    ok = ok && dp <= 2.0 / n && kf <= 2.0 / n;
    o.detail << "n=" << n << ": d_psi2 = " << dp << ", ky_fan = " << kf << "; ";
  }
  o.detail << "offset: d_psi2 = " << d_off << ", ky_fan = " << k_off;
  o.pass = ok;
}

void ky_fan_defining_inequality(Outcome& o) {
  std::mt19937_64 g(103);
  std::uniform_int_distribution<int> size(1, 400);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::exponential_distribution<double> ex(8.0);
  std::size_t upper = 0, minimal = 0, oracle_mismatch = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = static_cast<std::size_t>(size(g));
    std::vector<double> d(n);
    for (auto& x : d) x = t % 3 == 0 ? u(g) : ex(g);
    if (t % 5 == 0) {
      for (std::size_t i = 0; i < n; i += 3) d[i] = 0.0;
    }
    const auto w = t % 2 ? uniform_weights(n) : oracle::random_weights(g, n);
    const PairedSample s(d, w);
    const double eps = ky_fan(s);
    upper += exceedance_mass(s, eps) > eps + 1e-12;
    if (eps > 1e-6) minimal += !(exceedance_mass(s, eps - 1e-6) > eps - 1e-6);
    oracle_mismatch += std::abs(eps - oracle::ky_fan(d, w)) > 1e-12;
  }
  o.pass = upper == 0 && minimal == 0 && oracle_mismatch == 0;
  o.detail << "1000 samples, upper-bound violations " << upper << ", minimality violations "
           << minimal << ", disagreements with exhaustive search " << oracle_mismatch;
}

void gram_psd_injectivity(Outcome& o) {
  std::mt19937_64 g(104);
  std::uniform_int_distribution<int> size(2, 200);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_real_distribution<double> width(0.05, 0.5);
  std::size_t not_positive = 0, not_psd = 0, extended = 0, dup_accepted = 0;
  double smallest = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int d = dim(g);
    const auto pts = random_points(g, static_cast<std::size_t>(size(g)), d);
    const GaussianRbf k(width(g));
    const SpectralCertificate cert = injectivity_probe(k, pts, Precision::kExtended);
    not_positive += !cert.certified;
    extended += cert.digits > 17;
    smallest = std::min(smallest, cert.log10_min_eigenvalue);
    Eigen::MatrixXd gram = gram_matrix(k, pts);
    gram = 0.5 * (gram + gram.transpose()).eval();
    const double scale = gram.cwiseAbs().maxCoeff();
    not_psd += oracle::jacobi_eigenvalues(gram).front() < -1e-8 * scale;

    std::vector<Point> dup = pts;
    dup.push_back(pts[static_cast<std::size_t>(t) % pts.size()]);
    try {
      injectivity_probe(k, dup);
      ++dup_accepted;
    } catch (const InputError&) {
    }
  }
  o.pass = not_positive == 0 && not_psd == 0 && dup_accepted == 0;
  o.detail << "100 sets, uncertified " << not_positive << " (" << extended
           << " needed extended precision), PSD violations " << not_psd
           << ", duplicate sets accepted " << dup_accepted << ", smallest lambda_min 1e"
           << smallest;
}

Dataset random_dataset(std::mt19937_64& g, std::size_t n, int d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> x = random_points(g, n, d);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::sin(4.0 * x[i](0)) + 0.3 * (u(g) - 0.5);
  return Dataset(x, y);
}

void ridge_optimality(Outcome& o) {
  std::mt19937_64 g(105);
  std::uniform_int_distribution<int> size(1, 300);
  std::uniform_real_distribution<double> logl(-6.0, 0.0);
  std::uniform_real_distribution<double> width(0.05, 1.0);
  std::size_t bad_residual = 0;
  double worst_ratio = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = static_cast<std::size_t>(size(g));
    const Dataset d = random_dataset(g, n, 1 + t % 3);
    const double lambda = std::pow(10.0, logl(g));
    const Kernel k = t % 2 ? Kernel(GaussianRbf(width(g))) : Kernel(WendlandC2(width(g)));
    const RkhsFunction f = fit_kernel_ridge(d, k, lambda);
    const Eigen::MatrixXd gram = f.gram();
    const Eigen::Map<const Eigen::VectorXd> y(d.outputs().data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd res =
        gram * f.coefficients() + static_cast<double>(n) * lambda * f.coefficients() - y;
    const double ratio = res.norm() / (y.norm() + 1.0);
    worst_ratio = std::max(worst_ratio, ratio);
    bad_residual += ratio > 1e-8;
  }
  std::size_t bad_objective = 0;
  double worst_rel = 0.0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 10 + static_cast<std::size_t>(t) * 10;
    const Dataset d = random_dataset(g, n, 1 + t % 2);
    FitConfig cfg;
    cfg.lambda = std::pow(10.0, -1.0 - (t % 3));
    cfg.max_iters = 20000;
    cfg.step_size0 = 50.0;
    const Kernel k = GaussianRbf(0.3);
    const RkhsFunction ridge = fit_kernel_ridge(d, k, cfg.lambda);
    const double opt = regularized_objective(ridge.gram(), ridge.coefficients(), d,
                                             LossFunction::squared(), cfg.lambda);
    const FitResult r = fit_lipschitz_erm(d, k, LossFunction::squared(2.0), cfg);
    const double rel = std::abs(r.objective - opt) / opt;
    worst_rel = std::max(worst_rel, rel);
    bad_objective += rel > 1e-4;
  }
  o.pass = bad_residual == 0 && bad_objective == 0;
  o.detail << "100 ridge solves, max residual/(|y|+1) = " << worst_ratio
           << "; 10 subgradient fits, max relative objective gap = " << worst_rel;
}

void clipping_and_risk(Outcome& o) {
  std::mt19937_64 g(106);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd(0.0, 2.0);
  std::size_t clip_viol = 0, lip_viol = 0;
  for (int t = 0; t < 1000; ++t) {
    const double m = 0.25 + 2.0 * u(g);
    const std::size_t n = 5 + static_cast<std::size_t>(t % 40);
    std::vector<Point> x = random_points(g, n, 1 + t % 2);
    std::vector<double> y(n);
    for (auto& v : y) v = m * (2.0 * u(g) - 1.0);
    const Dataset d(x, y);
    Eigen::VectorXd a(static_cast<Eigen::Index>(n));
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a(i) = nd(g);
      b(i) = nd(g);
    }
    const Kernel k = GaussianRbf(0.1 + u(g));
    const RkhsFunction f(k, random_points(g, n, 1 + t % 2), a);
    const RkhsFunction h(k, random_points(g, n, 1 + t % 2), b);
    const LossFunction losses[] = {LossFunction::squared(m), LossFunction::absolute(),
                                   LossFunction::pinball(0.02 + 0.96 * u(g))};
    const LossFunction& loss = losses[t % 3];
    clip_viol += empirical_risk(clip(f, m), d, loss) > empirical_risk(f.as_function(), d, loss) + 1e-12;

    const LossFunction& lip = losses[1 + t % 2];
    const RealFunction ff = f.as_function();
    const RealFunction hh = h.as_function();
    double l1 = 0.0;
    for (const Point& xi : x) l1 += std::abs(ff(xi) - hh(xi));
    l1 /= static_cast<double>(n);
    const double gap = std::abs(empirical_risk(ff, d, lip) - empirical_risk(hh, d, lip));
    lip_viol += gap > lip.lipschitz_constant() * l1 + 1e-12;
  }
  o.pass = clip_viol == 0 && lip_viol == 0;
  o.detail << "1000 clipping checks, violations " << clip_viol
           << "; 1000 Lipschitz risk checks, violations " << lip_viol;
}

struct StudyRun {
  ConvergenceReport report;
  std::string csv;
  int exit_code = 0;
};

StudyRun run_cli_study(const fs::path& dir, const std::string& name, const std::string& config) {
  const fs::path cfg = dir / (name + ".cfg");
  const fs::path out = dir / (name + ".csv");
  std::ofstream(cfg) << config;
  const std::string c = cfg.string(), p = out.string();
  const char* argv[] = {"kdense", "study", "--config", c.c_str(), "--out", p.c_str()};
  std::ostringstream sink;
  StudyRun run;
  run.exit_code = cli::run_cli(6, argv, sink, sink);
  if (run.exit_code == 0) {
    run.csv = cli::read_text_file(out);
    run.report = cli::parse_report_csv(run.csv);
  }
  return run;
}

const char* kIndicatorStudy =
    "seed = 2026\nreplicates = 3\n"
    "[target]\ntype = indicator\na = 0\nb = 0.5\n"
    "[kernel]\ntype = gaussian\n"
    "[schedule]\nsample_sizes = 64, 256, 1024, 4096\nsampler = uniform\n";

const char* kSineStudy =
    "seed = 2026\nreplicates = 3\n"
    "[target]\ntype = sine\nfrequency = 1\n"
    "[kernel]\ntype = gaussian\n"
    "[schedule]\nsample_sizes = 64, 256, 1024, 4096\nsampler = uniform\n";

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "kdense_acceptance";
  fs::create_directories(dir);
  return dir;
}

const ConvergenceCell* find(const ConvergenceReport& r, std::size_t n, std::size_t rep) {
  for (const auto& c : r.cells) {
    if (c.n == n && c.replicate == rep) return &c;
  }
  return nullptr;
}

StudyRun& indicator_run() {
  static StudyRun run = run_cli_study(scratch_dir(), "indicator", kIndicatorStudy);
  return run;
}

void denseness_demo(Outcome& o) {
  const StudyRun& run = indicator_run();
  if (run.exit_code != 0 || run.report.partial() || run.report.cells.size() != 12) {
    o.pass = false;
    o.detail << "study failed with exit code " << run.exit_code;
    return;
  }
  bool a = true;
  for (std::size_t rep = 0; rep < 3; ++rep) {
    const auto* first = find(run.report, 64, rep);
    const auto* last = find(run.report, 4096, rep);
    a = a && last->d_psi < 0.1 && last->d_psi < 0.5 * first->d_psi;
    o.detail << "rep " << rep << ": d_psi2 " << first->d_psi << " -> " << last->d_psi << "; ";
  }
  const SeparationCheck sep = separation_check(run.report, 1.0);
  const RiskCheck risk = risk_convergence_check(run.report, 1.0);
  const bool b = sep.min_sup_gap >= 0.45;
  const bool c = risk.passed && risk.worst_margin >= 0.0;
  o.pass = a && b && c;
  o.detail << "(a) " << (a ? "ok" : "fails") << ", (b) min sup_gap " << sep.min_sup_gap
           << (b ? " ok" : " fails") << ", (c) risk margin " << risk.worst_margin
           << (c ? " ok" : " fails");
}

void continuous_control(Outcome& o) {
  const StudyRun run = run_cli_study(scratch_dir(), "sine", kSineStudy);
  if (run.exit_code != 0 || run.report.partial()) {
    o.pass = false;
    o.detail << "study failed with exit code " << run.exit_code;
    return;
  }
  for (std::size_t rep = 0; rep < 3; ++rep) {
    const auto* first = find(run.report, 64, rep);
    const auto* last = find(run.report, 4096, rep);
    o.pass = o.pass && last->sup_gap < 0.5 * first->sup_gap;
    o.detail << "rep " << rep << ": sup_gap " << first->sup_gap << " -> " << last->sup_gap
             << (rep < 2 ? "; " : "");
  }
}

void measure_kernel(Outcome& o) {
  std::mt19937_64 g(109);
  std::uniform_int_distribution<int> atoms(1, 12);
  std::size_t not_one = 0;
  const MeasureGaussian mk(GaussianRbf(0.4), 0.7);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = static_cast<std::size_t>(atoms(g));
    const EmpiricalMeasure p(random_points(g, m, 1 + t % 3), oracle::random_weights(g, m));
    const MeasureGaussian mk_d(t % 2 ? PointKernel(GaussianRbf(0.4)) : PointKernel(WendlandC2(0.8)),
                               0.7);
    not_one += eval_measure_kernel(mk_d, p, p) != 1.0;
  }
  const auto dx = EmpiricalMeasure::uniform({make_point({0.0})});
  const auto dy = EmpiricalMeasure::uniform({make_point({1.0})});
  const double mmd2 = mmd_squared(GaussianRbf(1.0), dx, dy);
  const bool closed = std::abs(mmd2 - oracle::kTwoMinusTwoInvE) <= 1e-12;
  std::vector<EmpiricalMeasure> ms;
  for (int i = 0; i < 20; ++i) {
    const std::size_t m = static_cast<std::size_t>(atoms(g));
    ms.emplace_back(random_points(g, m, 2), oracle::random_weights(g, m));
  }
  const Eigen::MatrixXd k = measure_gram_matrix(mk, ms);
  const double lmin = oracle::jacobi_eigenvalues(k).front();
  const double norm = k.cwiseAbs().maxCoeff();
  const bool psd = lmin >= -1e-8 * norm;
  o.pass = not_one == 0 && closed && psd;
  o.detail << "k(P,P) != 1 for " << not_one << " of 100; two-Dirac MMD^2 error "
           << std::abs(mmd2 - oracle::kTwoMinusTwoInvE) << "; 20x20 lambda_min " << lmin;
}

void determinism(Outcome& o) {
  const StudyRun& first = indicator_run();
  const StudyRun second = run_cli_study(scratch_dir(), "indicator_again", kIndicatorStudy);
  o.pass = first.exit_code == 0 && second.exit_code == 0 && !first.csv.empty() &&
           first.csv == second.csv;
  o.detail << "two runs, " << first.csv.size() << " and " << second.csv.size() << " bytes, "
           << (first.csv == second.csv ? "identical" : "different");
}

}  // namespace

int main() {
  const std::pair<const char*, Criterion> criteria[] = {
      {"metric axioms", metric_axioms},
      {"convergence equivalence", convergence_equivalence},
      {"ky fan defining inequality", ky_fan_defining_inequality},
      {"gram PSD and injectivity witness", gram_psd_injectivity},
      {"ridge optimality", ridge_optimality},
      {"clipping and risk bounds", clipping_and_risk},
      {"denseness demonstration", denseness_demo},
      {"continuous control", continuous_control},
      {"measure kernel", measure_kernel},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "threw: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("criterion %2d %-34s %s  (%.1fs) %s\n", index, name, o.pass ? "PASS" : "FAIL",
                secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  fs::remove_all(scratch_dir());
  return failures == 0 ? 0 : 1;
}
