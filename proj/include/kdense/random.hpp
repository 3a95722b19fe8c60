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

#include <cstdint>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

#include "kdense/types.hpp"

namespace kdense {

// Seed for one independent stream, mixed from the run seed, the sample size,
// the replicate index, and a purpose tag ("train", "eval", ...). Distinct tags
// give unrelated streams, so evaluation points never reuse training draws.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t replicate,
                          std::string_view purpose);

// mt19937_64 with explicit double conversions so draws are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);
  // Standard normal via the Box-Muller transform.
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Axis-aligned box [lower, upper] in R^d.
struct Box {
  Point lower;
  Point upper;

  static Box unit_interval();
  Eigen::Index dimension() const noexcept { return lower.size(); }
  bool contains(const Point& x) const;
  void validate() const;

  friend bool operator==(const Box& a, const Box& b) {
    return a.lower == b.lower && a.upper == b.upper;
  }
};

struct UniformSampler {
  friend bool operator==(const UniformSampler&, const UniformSampler&) = default;
};

// Independent N(mean, sd²) coordinates, restricted to the box by rejection.
struct TruncatedGaussianSampler {
  double mean = 0.5;
  double sd = 0.25;
  friend bool operator==(const TruncatedGaussianSampler&,
                         const TruncatedGaussianSampler&) = default;
};

using Sampler = std::variant<UniformSampler, TruncatedGaussianSampler>;

std::vector<Point> draw_points(const Sampler& sampler, const Box& domain, std::size_t n,
                               Rng& rng);

}  // namespace kdense
