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

#include "kdense/rkhs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kdense/errors.hpp"

namespace kdense {

RkhsFunction::RkhsFunction(Kernel kernel, std::vector<Point> centers,
                           Eigen::VectorXd coefficients)
    : kernel_(std::move(kernel)),
      point_kernel_(as_point_kernel(kernel_)),
      centers_(std::move(centers)),
      coefficients_(std::move(coefficients)) {
  check_points(centers_);
  if (static_cast<std::size_t>(coefficients_.size()) != centers_.size()) {
    throw InputError("RkhsFunction: " + std::to_string(centers_.size()) + " centers but " +
                     std::to_string(coefficients_.size()) + " coefficients");
  }
  if (!coefficients_.allFinite()) throw InputError("RkhsFunction: non-finite coefficient");
}

double RkhsFunction::operator()(const Point& x) const {
  if (x.size() != dimension()) {
    throw InputError("RkhsFunction evaluated at a point of dimension " +
                     std::to_string(x.size()) + ", expected " + std::to_string(dimension()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    total += coefficients_(static_cast<Eigen::Index>(i)) *
             radial_profile(point_kernel_, (x - centers_[i]).squaredNorm());
  }
  return total;
}

std::vector<double> RkhsFunction::evaluate(std::span<const Point> xs) const {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(), [this](const Point& x) { return (*this)(x); });
  return out;
}

double RkhsFunction::inner_with_center(std::size_t j) const {
  if (j >= centers_.size()) throw InputError("center index out of range");
  const Eigen::MatrixXd k = gram();
  double total = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    total += coefficients_(static_cast<Eigen::Index>(i)) *
             k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  }
  return total;
}

Eigen::MatrixXd RkhsFunction::gram() const { return gram_matrix(kernel_, centers_); }

RkhsFunction RkhsFunction::scaled(double a) const {
  return RkhsFunction(kernel_, centers_, a * coefficients_);
}

RealFunction RkhsFunction::as_function() const {
  return [f = *this](const Point& x) { return f(x); };
}

double eval_rkhs(const RkhsFunction& f, const Point& x) { return f(x); }

double rkhs_norm(const RkhsFunction& f) {
  const Eigen::VectorXd& a = f.coefficients();
  const double quad = a.dot(f.gram() * a);
  return std::sqrt(std::max(0.0, quad));
}

QuadratureSpec::QuadratureSpec(EmpiricalMeasure measure, double p)
    : measure_(std::move(measure)), p_(p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("quadrature exponent p must be >= 1");
}

double lp_norm_estimate(const RealFunction& f, const QuadratureSpec& q) {
  const auto& atoms = q.measure().atoms();
  const auto& w = q.measure().weights();
  double total = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    total += w[j] * std::pow(std::abs(f(atoms[j])), q.p());
  }
  return std::pow(total, 1.0 / q.p());
}

double kernel_lp_norm(const Kernel& k, const QuadratureSpec& q) {
  const auto& atoms = q.measure().atoms();
  const auto& w = q.measure().weights();
  double total = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    total += w[j] * std::pow(eval_kernel(k, atoms[j], atoms[j]), q.p() / 2.0);
  }
  return std::pow(total, 1.0 / q.p());
}

double apply_sk(const Kernel& k, const RealFunction& g, const QuadratureSpec& q,
                const Point& x) {
  const auto& atoms = q.measure().atoms();
  const auto& w = q.measure().weights();
  double total = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    total += w[j] * eval_kernel(k, x, atoms[j]) * g(atoms[j]);
  }
  return total;
}

SpectralCertificate injectivity_probe(const Kernel& k, std::span<const Point> pts,
                                      Precision precision) {
  const PointKernel pk = as_point_kernel(k);
  check_points(pts);
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  auto lex_less = [&pts](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(pts[a].begin(), pts[a].end(), pts[b].begin(),
                                        pts[b].end());
  };
  std::sort(order.begin(), order.end(), lex_less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (pts[order[i - 1]] == pts[order[i]]) {
      throw InputError("injectivity probe needs pairwise distinct points (duplicate at index " +
                       std::to_string(std::max(order[i - 1], order[i])) + ")");
    }
  }
  return gram_spectrum(pk, pts, precision);
}

}  // namespace kdense
