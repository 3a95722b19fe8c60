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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace kdense {

// A point of X ⊂ R^d. Coordinates must be finite.
using Point = Eigen::VectorXd;

// Real-valued function on points; used for targets, fitted predictors, and
// clipped predictors alike.
using RealFunction = std::function<double(const Point&)>;

// Vector-valued function on points (finite-dimensional Hilbert-space targets).
using VectorFunction = std::function<Eigen::VectorXd(const Point&)>;

Point make_point(std::initializer_list<double> coords);

// Throws InputError unless every coordinate is finite and d >= 1.
void check_point(const Point& x);

// Throws InputError unless `pts` is nonempty with one common dimension and
// finite coordinates. Returns that dimension.
Eigen::Index check_points(std::span<const Point> pts);

// Weights as a probability vector of length n.
std::vector<double> uniform_weights(std::size_t n);

// Throws InputError unless weights are nonnegative, finite, of length
// `expected`, and sum to 1 within 1e-12.
void check_probability_weights(std::span<const double> weights, std::size_t expected);

// A finitely supported probability measure: the sampled stand-in for μ,
// P_X, or a distribution embedded by the measure kernel.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::vector<Point> atoms, std::vector<double> weights);

  // Uniform weights over `atoms`.
  static EmpiricalMeasure uniform(std::vector<Point> atoms);

  const std::vector<Point>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  Eigen::Index dimension() const noexcept { return atoms_.front().size(); }

 private:
  std::vector<Point> atoms_;
  std::vector<double> weights_;
};

}  // namespace kdense
