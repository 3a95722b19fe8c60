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

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "kdense/types.hpp"

namespace kdense {

// k(x, x') = exp(-‖x − x'‖² / γ²).
class GaussianRbf {
 public:
  explicit GaussianRbf(double gamma);
  double gamma() const noexcept { return gamma_; }

  friend bool operator==(const GaussianRbf&, const GaussianRbf&) = default;

 private:
  double gamma_;
};

// Compactly supported C² Wendland function φ(r) = (1 − r)⁴₊ (4r + 1) with
// r = ‖x − x'‖ / support_radius.
class WendlandC2 {
 public:
  explicit WendlandC2(double support_radius);
  double support_radius() const noexcept { return support_radius_; }

  friend bool operator==(const WendlandC2&, const WendlandC2&) = default;

 private:
  double support_radius_;
};

// Kernels defined on points of R^d. A measure kernel can only wrap one of
// these, so nesting measure kernels is unrepresentable.
using PointKernel = std::variant<GaussianRbf, WendlandC2>;

// Gaussian-type kernel on probability measures through their mean embeddings
// under `base`: k(P, Q) = exp(-MMD²(P, Q) / γ²).
class MeasureGaussian {
 public:
  MeasureGaussian(PointKernel base, double gamma);
  const PointKernel& base() const noexcept { return base_; }
  double gamma() const noexcept { return gamma_; }

  friend bool operator==(const MeasureGaussian&, const MeasureGaussian&) = default;

 private:
  PointKernel base_;
  double gamma_;
};

using Kernel = std::variant<GaussianRbf, WendlandC2, MeasureGaussian>;

// Extracts the point-level kernel or throws VariantError.
PointKernel as_point_kernel(const Kernel& k);
Kernel widen(const PointKernel& k);

std::string describe(const Kernel& k);
std::string describe(const PointKernel& k);

// Radial profile of a point kernel as a function of the squared distance.
// Templated on the scalar so the same formula serves the extended-precision
// spectral certificate.
template <class Real>
Real radial_profile(const PointKernel& k, const Real& squared_distance) {
  using std::exp;
  using std::sqrt;
  if (const auto* g = std::get_if<GaussianRbf>(&k)) {
    const Real gamma(g->gamma());
    return exp(-squared_distance / (gamma * gamma));
  }
  const auto& w = std::get<WendlandC2>(k);
  const Real r = sqrt(squared_distance) / Real(w.support_radius());
  if (!(r < Real(1))) return Real(0);
  const Real one_minus = Real(1) - r;
  const Real sq = one_minus * one_minus;
  return sq * sq * (Real(4) * r + Real(1));
}

// Throws VariantError for MeasureGaussian and InputError on dimension
// mismatch.
double eval_kernel(const Kernel& k, const Point& x, const Point& y);

// K[i][j] = k(pts[i], pts[j]). Exactly symmetric: the upper triangle is
// computed and mirrored.
Eigen::MatrixXd gram_matrix(const Kernel& k, std::span<const Point> pts);

// C[i][j] = k(rows[i], cols[j]).
Eigen::MatrixXd cross_gram_matrix(const Kernel& k, std::span<const Point> rows,
                                  std::span<const Point> cols);

// max over the probe of sqrt(k(x, x)).
double sup_kernel_norm(const Kernel& k, std::span<const Point> probe);
double sup_kernel_norm(const MeasureGaussian& k, std::span<const EmpiricalMeasure> probe);

// ‖E_P Φ − E_Q Φ‖² in the RKHS of `base`, expanded through the reproducing
// property. Exactly symmetric in (P, Q) and exactly 0 for P = Q.
// Throws VariantError when `base` is a measure kernel.
double mmd_squared(const Kernel& base, const EmpiricalMeasure& p, const EmpiricalMeasure& q);

double eval_measure_kernel(const MeasureGaussian& k, const EmpiricalMeasure& p,
                           const EmpiricalMeasure& q);

Eigen::MatrixXd measure_gram_matrix(const MeasureGaussian& k,
                                    std::span<const EmpiricalMeasure> measures);

// Number of times a slightly negative MMD² (roundoff) was clamped to 0 in
// this process.
std::uint64_t mmd_clamp_count() noexcept;

}  // namespace kdense
