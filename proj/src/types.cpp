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

#include "kdense/types.hpp"

#include <cmath>
#include <string>

#include "kdense/errors.hpp"

namespace kdense {

Point make_point(std::initializer_list<double> coords) {
  Point x(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) x(i++) = c;
  return x;
}

void check_point(const Point& x) {
  if (x.size() < 1) throw InputError("point must have dimension >= 1");
  if (!x.allFinite()) throw InputError("point has a non-finite coordinate");
}

Eigen::Index check_points(std::span<const Point> pts) {
  if (pts.empty()) throw InputError("point set is empty");
  const Eigen::Index d = pts.front().size();
  for (const Point& x : pts) {
    check_point(x);
    if (x.size() != d) {
      throw InputError("dimension mismatch in point set: " + std::to_string(x.size()) +
                       " vs " + std::to_string(d));
    }
  }
  return d;
}

std::vector<double> uniform_weights(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

void check_probability_weights(std::span<const double> weights, std::size_t expected) {
  if (weights.size() != expected) {
    throw InputError("expected " + std::to_string(expected) + " weights, got " +
                     std::to_string(weights.size()));
  }
  if (weights.empty()) throw InputError("weights are empty");
  // Neumaier summation keeps the 1e-12 check meaningful for long vectors.
  double sum = 0.0;
  double carry = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InputError("weights must be finite and >= 0");
    const double t = sum + w;
    carry += std::abs(sum) >= std::abs(w) ? (sum - t) + w : (w - t) + sum;
    sum = t;
  }
  if (std::abs(sum + carry - 1.0) > 1e-12) {
    throw InputError("weights must sum to 1 (got " + std::to_string(sum + carry) + ")");
  }
}

EmpiricalMeasure::EmpiricalMeasure(std::vector<Point> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  check_points(atoms_);
  check_probability_weights(weights_, atoms_.size());
}

EmpiricalMeasure EmpiricalMeasure::uniform(std::vector<Point> atoms) {
  auto w = uniform_weights(atoms.size());
  return EmpiricalMeasure(std::move(atoms), std::move(w));
}

}  // namespace kdense
