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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kdense/types.hpp"

namespace kdense {

// ψ₁(x) = x / (1 + x).
struct Psi1 {
  friend bool operator==(const Psi1&, const Psi1&) = default;
};

// ψ₂(x) = min{1, x}.
struct Psi2 {
  friend bool operator==(const Psi2&, const Psi2&) = default;
};

// Piecewise-linear ψ tabulated on an increasing grid starting at 0. Held
// constant beyond the last node.
class CustomPsi {
 public:
  CustomPsi(std::vector<double> grid, std::vector<double> values);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }

  // Interpolated value without the [0, 1] clamp.
  double raw(double x) const;

  friend bool operator==(const CustomPsi&, const CustomPsi&) = default;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

using PsiFunction = std::variant<Psi1, Psi2, CustomPsi>;

std::string describe(const PsiFunction& psi);

// ψ(x) for x >= 0; Custom values are clamped to [0, 1]. Throws InputError
// for negative or non-finite x.
double psi_apply(const PsiFunction& psi, double x);

enum class PsiAxiom { kZeroAtOrigin, kPositive, kRange, kMonotone, kSubadditive };

std::string to_string(PsiAxiom axiom);

struct PsiViolation {
  PsiAxiom axiom;
  double a = 0.0;
  double b = 0.0;
  std::string detail;
};

struct PsiValidationReport {
  // First violation of each axiom, in PsiAxiom order.
  std::vector<PsiViolation> violations;
  bool passed() const noexcept { return violations.empty(); }
  std::optional<PsiViolation> first(PsiAxiom axiom) const;
};

// Grid check of ψ(0) = 0, ψ > 0 off the origin, range ⊆ [0, 1], monotonicity
// and subadditivity over all grid pairs (a, b) with a + b on the grid. Custom
// tables are checked before clamping. grid_n >= 2.
PsiValidationReport validate_psi(const PsiFunction& psi, double grid_max = 10.0,
                                 int grid_n = 1000);

// Pointwise distances d(f₁(ωⱼ), f₂(ωⱼ)) with their probability weights.
class PairedSample {
 public:
  PairedSample(std::vector<double> distances, std::vector<double> weights);
  static PairedSample uniform(std::vector<double> distances);

  const std::vector<double>& distances() const noexcept { return distances_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return distances_.size(); }

 private:
  std::vector<double> distances_;
  std::vector<double> weights_;
};

// Σⱼ wⱼ ψ(dⱼ).
double d_psi(const PsiFunction& psi, const PairedSample& s);

// inf{ε >= 0 : P(d > ε) <= ε} for the weighted sample.
double ky_fan(const PairedSample& s);

// P(d > ε) under the sample weights.
double exceedance_mass(const PairedSample& s, double epsilon);

// distances[j] = |f(ptsⱼ) − g(ptsⱼ)|.
PairedSample paired_sample(const RealFunction& f, const RealFunction& g,
                           std::span<const Point> pts, std::vector<double> weights);

// distances[j] = ‖f(ptsⱼ) − g(ptsⱼ)‖₂.
PairedSample paired_sample(const VectorFunction& f, const VectorFunction& g,
                           std::span<const Point> pts, std::vector<double> weights);

}  // namespace kdense
