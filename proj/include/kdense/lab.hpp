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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kdense/erm.hpp"
#include "kdense/kernels.hpp"
#include "kdense/prob_metrics.hpp"
#include "kdense/random.hpp"
#include "kdense/rkhs.hpp"
#include "kdense/types.hpp"

namespace kdense {

// Targets act on the first coordinate; the remaining coordinates of the
// domain box are ignored by the target but still sampled.

// 1 on the closed interval [a, b], 0 elsewhere.
struct IndicatorInterval {
  double a = 0.0;
  double b = 0.5;
  friend bool operator==(const IndicatorInterval&, const IndicatorInterval&) = default;
};

struct Step {
  double a = 0.0;
  double b = 0.0;
  double level = 0.0;
  friend bool operator==(const Step&, const Step&) = default;
};

// Σᵢ levelᵢ · 1_[aᵢ, bᵢ] over pairwise disjoint closed intervals.
struct StepCombination {
  std::vector<Step> steps;
  friend bool operator==(const StepCombination&, const StepCombination&) = default;
};

// +1 for x >= offset, −1 below.
struct Sign {
  double offset = 0.0;
  friend bool operator==(const Sign&, const Sign&) = default;
};

// sin(2π · frequency · x).
struct ContinuousSine {
  double frequency = 1.0;
  friend bool operator==(const ContinuousSine&, const ContinuousSine&) = default;
};

using TargetShape = std::variant<IndicatorInterval, StepCombination, Sign, ContinuousSine>;

struct Jump {
  double location = 0.0;
  double magnitude = 0.0;
};

struct TargetFunction {
  TargetShape shape = IndicatorInterval{};
  Box domain = Box::unit_interval();

  // Throws InputError if intervals leave the domain, overlap, or are empty.
  void validate() const;
  // Discontinuities strictly inside the domain along the first axis.
  std::vector<Jump> jumps() const;
  bool continuous() const { return jumps().empty(); }

  friend bool operator==(const TargetFunction&, const TargetFunction&) = default;
};

// Evaluator that throws InputError outside the domain.
RealFunction make_target(const TargetFunction& t);

enum class KernelFamily { kGaussian, kWendland };

// Bandwidth (Gaussian γ or Wendland radius) as scale · n^(−1/(d+2)), or a
// fixed value when `fixed` is set.
struct KernelSchedule {
  KernelFamily family = KernelFamily::kGaussian;
  double scale = 1.0;
  std::optional<double> fixed;

  double bandwidth(std::size_t n, Eigen::Index dimension) const;
  Kernel at(std::size_t n, Eigen::Index dimension) const;
  void validate() const;

  friend bool operator==(const KernelSchedule&, const KernelSchedule&) = default;
};

// λ(n) = scale / n^exponent.
struct LambdaSchedule {
  double scale = 1.0;
  double exponent = 1.0;

  double at(std::size_t n) const;
  void validate() const;

  friend bool operator==(const LambdaSchedule&, const LambdaSchedule&) = default;
};

struct StudyConfig {
  TargetFunction target;
  KernelSchedule kernel;
  LambdaSchedule lambda;
  std::vector<std::size_t> sample_sizes{64, 256, 1024, 4096};
  PsiFunction psi = Psi2{};
  // 0 selects 10 · max(sample_sizes).
  std::size_t eval_sample_size = 0;
  std::size_t grid_resolution = 10001;
  std::uint64_t seed = 0;
  std::size_t replicates = 1;
  Sampler sampler = UniformSampler{};
  // Standard deviation of Gaussian label noise on training and evaluation
  // labels.
  double label_noise = 0.0;
  // Clip the approximant to [−M, M] before evaluation when set.
  std::optional<double> clip_bound;
  // Wall times are measured only when set; otherwise reported as 0 so that
  // repeated runs serialize identically.
  bool record_timing = false;
  // Worker threads for independent cells; 0 uses the hardware concurrency.
  std::size_t threads = 1;

  std::size_t effective_eval_size() const;
  // Throws InputError naming the offending field.
  void validate() const;

  friend bool operator==(const StudyConfig&, const StudyConfig&) = default;
};

struct ConvergenceCell {
  std::size_t n = 0;
  std::size_t replicate = 0;
  double d_psi = 0.0;
  double ky_fan = 0.0;
  double sup_gap = 0.0;
  double l1_gap = 0.0;
  double risk_gap = 0.0;
  double wall_time_s = 0.0;
  bool ok = true;
  std::string error;

  friend bool operator==(const ConvergenceCell&, const ConvergenceCell&) = default;
};

struct ConvergenceReport {
  // Ordered by (n, replicate).
  std::vector<ConvergenceCell> cells;

  bool partial() const;
  friend bool operator==(const ConvergenceReport&, const ConvergenceReport&) = default;
};

// Draws n points from the sampler, labels them with the target (plus
// optional noise), and fits kernel ridge regression.
RkhsFunction fit_approximant(const RealFunction& target, std::size_t n, const Kernel& k,
                             double lambda, const Sampler& sampler, const Box& domain,
                             std::uint64_t seed, double label_noise = 0.0);

// max |f − g| over a grid: `grid_resolution` uniform nodes per axis in d = 1
// (about grid_resolution^(1/d) per axis otherwise), plus the nodes jump and
// jump ± spacing along the first axis for every jump. A lower bound on
// ‖f − g‖∞.
double sup_gap_estimate(const RealFunction& f, const RealFunction& g, const Box& domain,
                        std::size_t grid_resolution, const std::vector<Jump>& jumps = {});

// Runs every (n, replicate) cell. A failing cell is recorded with ok = false
// and the run continues.
ConvergenceReport run_study(const StudyConfig& cfg);

struct RiskCheck {
  bool passed = true;
  // min over cells of |L|₁ · l1_gap + 1e-10 − risk_gap.
  double worst_margin = 0.0;
  std::size_t cells_checked = 0;
};

RiskCheck risk_convergence_check(const ConvergenceReport& report, double lipschitz_constant);

struct SeparationCheck {
  bool weak_converges = true;   // final d_ψ < first d_ψ in every replicate
  bool strong_bounded = true;   // min sup_gap >= 0.45 · smallest jump
  double min_sup_gap = 0.0;
  double threshold = 0.0;
  bool passed() const { return weak_converges && strong_bounded; }
};

// The weak-versus-strong separation for a discontinuous target whose smallest
// jump is `smallest_jump`.
SeparationCheck separation_check(const ConvergenceReport& report, double smallest_jump);

struct SizeSummary {
  std::size_t n = 0;
  std::size_t cells = 0;
  double mean_d_psi = 0.0;
  double mean_ky_fan = 0.0;
  double mean_sup_gap = 0.0;
  double mean_l1_gap = 0.0;
  double mean_risk_gap = 0.0;
};

// Means over successful replicates, one entry per sample size.
std::vector<SizeSummary> summarize_by_size(const ConvergenceReport& report);

}  // namespace kdense
