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

#include "kdense/random.hpp"

#include <cmath>
#include <numbers>

#include "kdense/errors.hpp"

namespace kdense {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t replicate,
                          std::string_view purpose) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ n);
  h = splitmix64(h ^ replicate);
  return splitmix64(h ^ fnv1a(purpose));
}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::normal() {
  // 1 − u lies in (0, 1], keeping the logarithm finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Box Box::unit_interval() { return Box{make_point({0.0}), make_point({1.0})}; }

bool Box::contains(const Point& x) const {
  if (x.size() != lower.size()) return false;
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

void Box::validate() const {
  if (lower.size() < 1 || lower.size() != upper.size()) {
    throw InputError("domain box bounds must share a dimension >= 1");
  }
  if (!lower.allFinite() || !upper.allFinite() || !(lower.array() < upper.array()).all()) {
    throw InputError("domain box needs finite bounds with lower < upper");
  }
}

std::vector<Point> draw_points(const Sampler& sampler, const Box& domain, std::size_t n,
                               Rng& rng) {
  domain.validate();
  const Eigen::Index d = domain.dimension();
  std::vector<Point> pts;
  pts.reserve(n);
  if (std::holds_alternative<UniformSampler>(sampler)) {
    for (std::size_t i = 0; i < n; ++i) {
      Point x(d);
      for (Eigen::Index c = 0; c < d; ++c) x(c) = rng.uniform(domain.lower(c), domain.upper(c));
      pts.push_back(std::move(x));
    }
    return pts;
  }
  const auto& g = std::get<TruncatedGaussianSampler>(sampler);
  if (!(g.sd > 0.0) || !std::isfinite(g.mean)) {
    throw InputError("truncated Gaussian sampler needs sd > 0 and a finite mean");
  }
  constexpr int kMaxRejections = 1'000'000;
  for (std::size_t i = 0; i < n; ++i) {
    Point x(d);
    for (Eigen::Index c = 0; c < d; ++c) {
      int tries = 0;
      double v;
      do {
        if (++tries > kMaxRejections) {
          throw NumericalError("truncated Gaussian sampler: box has negligible mass");
        }
        v = g.mean + g.sd * rng.normal();
      } while (v < domain.lower(c) || v > domain.upper(c));
      x(c) = v;
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace kdense
