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
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kdense/kernels.hpp"
#include "kdense/rkhs.hpp"
#include "kdense/spectral.hpp"
#include "kdense/types.hpp"

namespace kdense {

// Training sample ((x₁, y₁), …, (xₙ, yₙ)).
class Dataset {
 public:
  Dataset(std::vector<Point> inputs, std::vector<double> outputs);

  const std::vector<Point>& inputs() const noexcept { return inputs_; }
  const std::vector<double>& outputs() const noexcept { return outputs_; }
  std::size_t size() const noexcept { return inputs_.size(); }

 private:
  std::vector<Point> inputs_;
  std::vector<double> outputs_;
};

// Convex pointwise loss L(y, t) in the residual r = y − t.
class LossFunction {
 public:
  enum class Kind { kSquared, kAbsolute, kPinball };

  // (y − t)². Lipschitz only on a bounded range: with |y|, |t| <= bound the
  // stored constant is 4·bound.
  static LossFunction squared(double output_bound = 1.0);
  // |y − t|, Lipschitz constant 1.
  static LossFunction absolute();
  // τ·r for r >= 0, (τ − 1)·r otherwise; Lipschitz constant max(τ, 1 − τ).
  static LossFunction pinball(double tau);

  Kind kind() const noexcept { return kind_; }
  double tau() const noexcept { return tau_; }
  double lipschitz_constant() const noexcept { return lipschitz_; }

  double value(double y, double t) const;
  // A subgradient in t. At r = 0 the (τ − 1)·r branch is taken, so pinball
  // returns 1 − τ and absolute returns 1.
  double derivative(double y, double t) const;

  std::string name() const;

  friend bool operator==(const LossFunction&, const LossFunction&) = default;

 private:
  LossFunction(Kind kind, double tau, double lipschitz)
      : kind_(kind), tau_(tau), lipschitz_(lipschitz) {}

  Kind kind_;
  double tau_;
  double lipschitz_;
};

// L = ((yᵢ − yⱼ) − (f(xᵢ) − f(xⱼ)))². The only pairwise loss provided.
enum class PairwiseLoss { kRankingSquared };

struct FitConfig {
  double lambda = 1e-3;
  int max_iters = 5000;
  double step_size0 = 0.5;
  double tol = 1e-8;
  std::uint64_t seed = 0;

  // Throws InputError naming the offending field.
  void validate() const;

  friend bool operator==(const FitConfig&, const FitConfig&) = default;
};

struct FitResult {
  RkhsFunction function;
  double objective = 0.0;
  // Objective at α = 0; the solvers never return anything worse.
  double zero_objective = 0.0;
  int iterations = 0;
  // ‖∇‖_H of the returned iterate (a subgradient for nonsmooth losses).
  double gradient_norm = 0.0;
  bool converged = false;
};

// (1/n) Σ L(yᵢ, f(xᵢ)).
double empirical_risk(const RealFunction& f, const Dataset& d, const LossFunction& loss);

// (1/n) Σ L(yᵢ, (Kα)ᵢ) + λ αᵀKα for the representer expansion on d.inputs().
double regularized_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& alpha,
                             const Dataset& d, const LossFunction& loss, double lambda);

// (1/n²) Σᵢ Σⱼ L(·) + λ αᵀKα for the ranking-squared pairwise loss.
double pairwise_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& alpha,
                          const Dataset& d, double lambda);

// Exact minimizer of the squared-loss objective: (K + nλI)α = y with centers
// at the inputs.
RkhsFunction fit_kernel_ridge(const Dataset& d, const Kernel& k, double lambda,
                              SpdSolveInfo* info = nullptr);

// Projected functional subgradient descent for convex Lipschitz losses. The
// direction is the RKHS subgradient (1/n)Σ uᵢ k(·, xᵢ) + 2λf, step
// step_size0/√t, projection onto the ball ‖f‖²_H <= J(0)/λ that contains the
// minimizer. Returns the best iterate seen, starting from α = 0.
FitResult fit_lipschitz_erm(const Dataset& d, const Kernel& k, const LossFunction& loss,
                            const FitConfig& cfg);

// Gradient descent for the pairwise objective with constant step
// step_size0, halved whenever a step fails to decrease the objective. Stops
// when ‖∇‖_H <= tol or after max_iters.
FitResult fit_pairwise(const Dataset& d, const Kernel& k, PairwiseLoss loss,
                       const FitConfig& cfg);

double clip_value(double value, double bound);

// max{−M, min{M, f}}.
RealFunction clip(const RealFunction& f, double bound);
RealFunction clip(const RkhsFunction& f, double bound);

}  // namespace kdense
