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

#include <span>
#include <vector>

#include <Eigen/Core>

#include "kdense/kernels.hpp"
#include "kdense/spectral.hpp"
#include "kdense/types.hpp"

namespace kdense {

// f = Σᵢ αᵢ k(·, cᵢ). Immutable once built.
class RkhsFunction {
 public:
  // Throws VariantError for a measure kernel, InputError for mismatched
  // lengths or dimensions.
  RkhsFunction(Kernel kernel, std::vector<Point> centers, Eigen::VectorXd coefficients);

  const Kernel& kernel() const noexcept { return kernel_; }
  const std::vector<Point>& centers() const noexcept { return centers_; }
  const Eigen::VectorXd& coefficients() const noexcept { return coefficients_; }
  Eigen::Index dimension() const noexcept { return centers_.front().size(); }

  // Σᵢ αᵢ k(x, cᵢ), accumulated in center order.
  double operator()(const Point& x) const;
  std::vector<double> evaluate(std::span<const Point> xs) const;

  // (Kα)ⱼ = ⟨f, k(·, cⱼ)⟩ through the Gram matrix; same accumulation order as
  // operator() at cⱼ.
  double inner_with_center(std::size_t j) const;

  Eigen::MatrixXd gram() const;

  RkhsFunction scaled(double a) const;

  RealFunction as_function() const;

 private:
  Kernel kernel_;
  PointKernel point_kernel_;
  std::vector<Point> centers_;
  Eigen::VectorXd coefficients_;
};

double eval_rkhs(const RkhsFunction& f, const Point& x);

// sqrt(max(0, αᵀKα)).
double rkhs_norm(const RkhsFunction& f);

// μ (as an empirical measure) and the exponent p >= 1.
class QuadratureSpec {
 public:
  QuadratureSpec(EmpiricalMeasure measure, double p);

  const EmpiricalMeasure& measure() const noexcept { return measure_; }
  double p() const noexcept { return p_; }

 private:
  EmpiricalMeasure measure_;
  double p_;
};

// (Σⱼ wⱼ |f(xⱼ)|^p)^{1/p}.
double lp_norm_estimate(const RealFunction& f, const QuadratureSpec& q);

// ‖k‖_{L_p(μ)} = (Σⱼ wⱼ k(xⱼ, xⱼ)^{p/2})^{1/p}: the factor in
// ‖f‖_{L_p(μ)} <= ‖k‖_{L_p(μ)} ‖f‖_H.
double kernel_lp_norm(const Kernel& k, const QuadratureSpec& q);

// S_k g(x) = Σⱼ wⱼ k(x, xⱼ) g(xⱼ).
double apply_sk(const Kernel& k, const RealFunction& g, const QuadratureSpec& q, const Point& x);

// Smallest Gram eigenvalue on pairwise-distinct points. A certified positive
// value shows S_k is injective on functions supported on `pts` only; it says
// nothing about the full L_{p'}(μ). Throws InputError on duplicate points.
SpectralCertificate injectivity_probe(const Kernel& k, std::span<const Point> pts,
                                      Precision precision = Precision::kDouble);

}  // namespace kdense
