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

#include "kdense/prob_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kdense/errors.hpp"

namespace kdense {
namespace {

constexpr double kAxiomTolerance = 1e-12;

double psi_raw(const PsiFunction& psi, double x) {
  if (std::holds_alternative<Psi1>(psi)) return x / (1.0 + x);
  if (std::holds_alternative<Psi2>(psi)) return std::min(1.0, x);
  return std::get<CustomPsi>(psi).raw(x);
}

std::string fmt_pair(double a, double b) {
  std::ostringstream os;
  os.precision(17);
  os << "a=" << a << ", b=" << b;
  return os.str();
}

}  // namespace

CustomPsi::CustomPsi(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() < 2 || grid_.size() != values_.size()) {
    throw InputError("custom psi needs >= 2 nodes and one value per node");
  }
  if (grid_.front() != 0.0) throw InputError("custom psi grid must start at 0");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i])) {
      throw InputError("custom psi table has a non-finite entry");
    }
    if (i > 0 && !(grid_[i] > grid_[i - 1])) {
      throw InputError("custom psi grid must be strictly increasing");
    }
  }
}

double CustomPsi::raw(double x) const {
  if (x >= grid_.back()) return values_.back();
  const auto upper = std::upper_bound(grid_.begin(), grid_.end(), x);
  const auto i = static_cast<std::size_t>(upper - grid_.begin());
  const double x0 = grid_[i - 1];
  const double x1 = grid_[i];
  const double t = (x - x0) / (x1 - x0);
  return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

std::string describe(const PsiFunction& psi) {
  if (std::holds_alternative<Psi1>(psi)) return "psi1";
  if (std::holds_alternative<Psi2>(psi)) return "psi2";
  return "custom(" + std::to_string(std::get<CustomPsi>(psi).grid().size()) + " nodes)";
}

double psi_apply(const PsiFunction& psi, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw InputError("psi argument must be finite and >= 0");
  }
  return std::clamp(psi_raw(psi, x), 0.0, 1.0);
}

std::string to_string(PsiAxiom axiom) {
  switch (axiom) {
    case PsiAxiom::kZeroAtOrigin: return "zero-at-origin";
    case PsiAxiom::kPositive: return "positive";
    case PsiAxiom::kRange: return "range";
    case PsiAxiom::kMonotone: return "monotone";
    case PsiAxiom::kSubadditive: return "subadditive";
  }
  return "unknown";
}

std::optional<PsiViolation> PsiValidationReport::first(PsiAxiom axiom) const {
  for (const auto& v : violations) {
    if (v.axiom == axiom) return v;
  }
  return std::nullopt;
}

PsiValidationReport validate_psi(const PsiFunction& psi, double grid_max, int grid_n) {
  if (grid_n < 2) throw InputError("validate_psi needs grid_n >= 2");
  if (!(grid_max > 0.0) || !std::isfinite(grid_max)) {
    throw InputError("validate_psi needs a finite grid_max > 0");
  }
  const double h = grid_max / static_cast<double>(grid_n - 1);
  std::vector<double> values(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) values[i] = psi_raw(psi, i * h);

  PsiValidationReport report;
  auto record = [&report](PsiAxiom axiom, double a, double b, std::string detail) {
    report.violations.push_back({axiom, a, b, std::move(detail)});
  };

  if (std::abs(values[0]) > kAxiomTolerance) {
    record(PsiAxiom::kZeroAtOrigin, 0.0, 0.0, "psi(0) = " + std::to_string(values[0]));
  }
  for (int i = 1; i < grid_n; ++i) {
    if (!(values[i] > 0.0)) {
      record(PsiAxiom::kPositive, i * h, 0.0, "psi(a) = " + std::to_string(values[i]));
      break;
    }
  }
  for (int i = 0; i < grid_n; ++i) {
    if (values[i] < -kAxiomTolerance || values[i] > 1.0 + kAxiomTolerance) {
      record(PsiAxiom::kRange, i * h, 0.0,
             "psi(a) = " + std::to_string(values[i]) + " outside [0, 1]");
      break;
    }
  }
  for (int i = 1; i < grid_n; ++i) {
    if (values[i] < values[i - 1] - kAxiomTolerance) {
      record(PsiAxiom::kMonotone, (i - 1) * h, i * h, "psi decreases");
      break;
    }
  }
  bool found = false;
  for (int i = 0; i < grid_n && !found; ++i) {
    for (int j = i; i + j < grid_n; ++j) {
      if (values[i + j] > values[i] + values[j] + kAxiomTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "psi(a+b) = " << values[i + j] << " > psi(a) + psi(b) = " << values[i] + values[j]
           << " at " << fmt_pair(i * h, j * h);
        record(PsiAxiom::kSubadditive, i * h, j * h, os.str());
        found = true;
        break;
      }
    }
  }
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const PsiViolation& l, const PsiViolation& r) { return l.axiom < r.axiom; });
  return report;
}

PairedSample::PairedSample(std::vector<double> distances, std::vector<double> weights)
    : distances_(std::move(distances)), weights_(std::move(weights)) {
  if (distances_.empty()) throw InputError("paired sample is empty");
  for (double d : distances_) {
    if (!std::isfinite(d) || d < 0.0) {
      throw InputError("paired sample distances must be finite and >= 0");
    }
  }
  check_probability_weights(weights_, distances_.size());
}

PairedSample PairedSample::uniform(std::vector<double> distances) {
  auto w = uniform_weights(distances.size());
  return PairedSample(std::move(distances), std::move(w));
}

// Weighted sums below are normalized by the summed weights.
double d_psi(const PsiFunction& psi, const PairedSample& s) {
  double total = 0.0;
  double mass = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    total += s.weights()[j] * psi_apply(psi, s.distances()[j]);
    mass += s.weights()[j];
  }
  return total / mass;
}

double exceedance_mass(const PairedSample& s, double epsilon) {
  double mass = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s.distances()[j] > epsilon) mass += s.weights()[j];
    total += s.weights()[j];
  }
  return mass / total;
}

double ky_fan(const PairedSample& s) {
  // Distinct distances with positive weight, largest first, with the mass
  // sitting on each value.
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s.weights()[j] > 0.0) atoms.emplace_back(s.distances()[j], s.weights()[j]);
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& l, const auto& r) { return l.first > r.first; });
  std::vector<double> levels;
  std::vector<double> level_mass;
  for (const auto& [d, w] : atoms) {
    if (levels.empty() || d != levels.back()) {
      levels.push_back(d);
      level_mass.push_back(0.0);
    }
    level_mass.back() += w;
  }
  // P(d > ε) is a right-continuous step function: 0 on [v₁, ∞) and m_k (mass
  // of the top k levels) on [v_{k+1}, v_k), with v_{m+1} = 0. On each step
  // the smallest feasible ε is max(v_{k+1}, m_k), valid if it stays below v_k.
  double total = 0.0;
  for (double m : level_mass) total += m;
  double best = levels.front();
  double cumulative = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    cumulative += level_mass[k];
    const double lower = k + 1 < levels.size() ? levels[k + 1] : 0.0;
    const double candidate = std::max(lower, cumulative / total);
    if (candidate < levels[k]) best = std::min(best, candidate);
  }
  return best;
}

PairedSample paired_sample(const RealFunction& f, const RealFunction& g,
                           std::span<const Point> pts, std::vector<double> weights) {
  std::vector<double> distances(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) distances[j] = std::abs(f(pts[j]) - g(pts[j]));
  return PairedSample(std::move(distances), std::move(weights));
}

PairedSample paired_sample(const VectorFunction& f, const VectorFunction& g,
                           std::span<const Point> pts, std::vector<double> weights) {
  std::vector<double> distances(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const Eigen::VectorXd a = f(pts[j]);
    const Eigen::VectorXd b = g(pts[j]);
    if (a.size() != b.size()) throw InputError("vector-valued functions differ in dimension");
    distances[j] = (a - b).norm();
  }
  return PairedSample(std::move(distances), std::move(weights));
}

}  // namespace kdense
