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

#include "kdense/erm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kdense/errors.hpp"

namespace kdense {
namespace {

double h_norm(const Eigen::MatrixXd& gram, const Eigen::VectorXd& v) {
  return std::sqrt(std::max(0.0, v.dot(gram * v)));
}

void check_finite_objective(double value, int iteration, const char* solver) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << solver << ": objective became non-finite at iteration " << iteration
       << " (reduce step_size0)";
    throw NumericalError(os.str());
  }
}

}  // namespace

Dataset::Dataset(std::vector<Point> inputs, std::vector<double> outputs)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
  check_points(inputs_);
  if (inputs_.size() != outputs_.size()) {
    throw InputError("dataset has " + std::to_string(inputs_.size()) + " inputs but " +
                     std::to_string(outputs_.size()) + " outputs");
  }
  for (double y : outputs_) {
    if (!std::isfinite(y)) throw InputError("dataset output is not finite");
  }
}

LossFunction LossFunction::squared(double output_bound) {
  if (!(output_bound > 0.0) || !std::isfinite(output_bound)) {
    throw InputError("squared loss output_bound must be finite and > 0");
  }
  return LossFunction(Kind::kSquared, 0.0, 4.0 * output_bound);
}

LossFunction LossFunction::absolute() { return LossFunction(Kind::kAbsolute, 0.0, 1.0); }

LossFunction LossFunction::pinball(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw InputError("pinball tau must lie in (0, 1)");
  return LossFunction(Kind::kPinball, tau, std::max(tau, 1.0 - tau));
}

double LossFunction::value(double y, double t) const {
  const double r = y - t;
  switch (kind_) {
    case Kind::kSquared: return r * r;
    case Kind::kAbsolute: return std::abs(r);
    case Kind::kPinball: return r >= 0.0 ? tau_ * r : (tau_ - 1.0) * r;
  }
  return 0.0;
}

double LossFunction::derivative(double y, double t) const {
  const double r = y - t;
  switch (kind_) {
    case Kind::kSquared: return -2.0 * r;
    case Kind::kAbsolute: return r > 0.0 ? -1.0 : 1.0;
    case Kind::kPinball: return r > 0.0 ? -tau_ : 1.0 - tau_;
  }
  return 0.0;
}

std::string LossFunction::name() const {
  switch (kind_) {
    case Kind::kSquared: return "squared";
    case Kind::kAbsolute: return "absolute";
    case Kind::kPinball: return "pinball(tau=" + std::to_string(tau_) + ")";
  }
  return "unknown";
}

void FitConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be > 0");
  if (max_iters < 1) throw InputError("max_iters must be >= 1");
  if (!(step_size0 > 0.0) || !std::isfinite(step_size0)) {
    throw InputError("step_size0 must be > 0");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InputError("tol must be > 0");
}

double empirical_risk(const RealFunction& f, const Dataset& d, const LossFunction& loss) {
  double total = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    total += loss.value(d.outputs()[i], f(d.inputs()[i]));
  }
  return total / static_cast<double>(d.size());
}

double regularized_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& alpha,
                             const Dataset& d, const LossFunction& loss, double lambda) {
  const Eigen::VectorXd f = gram * alpha;
  double data = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    data += loss.value(d.outputs()[i], f(static_cast<Eigen::Index>(i)));
  }
  return data / static_cast<double>(d.size()) + lambda * alpha.dot(f);
}

double pairwise_objective(const Eigen::MatrixXd& gram, const Eigen::VectorXd& alpha,
                          const Dataset& d, double lambda) {
  const Eigen::VectorXd f = gram * alpha;
  const auto n = static_cast<double>(d.size());
  // Σᵢ Σⱼ (rᵢ − rⱼ)² = 2n Σ (rᵢ − r̄)² with r = y − f.
  const Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(d.outputs().data(), f.size()) - f;
  const double centered = (r.array() - r.mean()).square().sum();
  return 2.0 * centered / n + lambda * alpha.dot(f);
}

RkhsFunction fit_kernel_ridge(const Dataset& d, const Kernel& k, double lambda,
                              SpdSolveInfo* info) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be > 0");
  Eigen::MatrixXd system = gram_matrix(k, d.inputs());
  system.diagonal().array() += static_cast<double>(d.size()) * lambda;
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(
      d.outputs().data(), static_cast<Eigen::Index>(d.size()));
  Eigen::VectorXd alpha = solve_spd(system, y, info);
  return RkhsFunction(k, d.inputs(), std::move(alpha));
}

FitResult fit_lipschitz_erm(const Dataset& d, const Kernel& k, const LossFunction& loss,
                            const FitConfig& cfg) {
  cfg.validate();
  const Eigen::MatrixXd gram = gram_matrix(k, d.inputs());
  const auto n = static_cast<Eigen::Index>(d.size());
  const double inv_n = 1.0 / static_cast<double>(n);

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  const double zero_objective = regularized_objective(gram, alpha, d, loss, cfg.lambda);
  const double radius = std::sqrt(zero_objective / cfg.lambda);

  Eigen::VectorXd best_alpha = alpha;
  double best_objective = zero_objective;
  bool converged = false;
  int t = 1;
  for (; t <= cfg.max_iters; ++t) {
    const Eigen::VectorXd f = gram * alpha;
    Eigen::VectorXd direction(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      direction(i) = loss.derivative(d.outputs()[i], f(i)) * inv_n + 2.0 * cfg.lambda * alpha(i);
    }
    const double gnorm = h_norm(gram, direction);
    if (gnorm <= cfg.tol) {
      converged = true;
      break;
    }
    alpha -= (cfg.step_size0 / std::sqrt(static_cast<double>(t))) * direction;
    const double norm = h_norm(gram, alpha);
    if (norm > radius) alpha *= radius / norm;

    const double objective = regularized_objective(gram, alpha, d, loss, cfg.lambda);
    check_finite_objective(objective, t, "fit_lipschitz_erm");
    if (objective < best_objective) {
      best_objective = objective;
      best_alpha = alpha;
    }
  }
  const Eigen::VectorXd f_best = gram * best_alpha;
  Eigen::VectorXd best_direction(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    best_direction(i) =
        loss.derivative(d.outputs()[i], f_best(i)) * inv_n + 2.0 * cfg.lambda * best_alpha(i);
  }
  FitResult result{RkhsFunction(k, d.inputs(), best_alpha)};
  result.objective = best_objective;
  result.zero_objective = zero_objective;
  result.iterations = std::min(t, cfg.max_iters);
  result.gradient_norm = h_norm(gram, best_direction);
  result.converged = converged;
  return result;
}

FitResult fit_pairwise(const Dataset& d, const Kernel& k, PairwiseLoss /*loss*/,
                       const FitConfig& cfg) {
  cfg.validate();
  if (d.size() < 2) throw InputError("pairwise learning needs at least 2 samples");
  const Eigen::MatrixXd gram = gram_matrix(k, d.inputs());
  const auto n = static_cast<Eigen::Index>(d.size());
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(d.outputs().data(), n);

  auto gradient = [&](const Eigen::VectorXd& a) {
    const Eigen::VectorXd r = y - gram * a;
    return Eigen::VectorXd((-4.0 / static_cast<double>(n)) * (r.array() - r.mean()).matrix() +
                           2.0 * cfg.lambda * a);
  };

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  const double zero_objective = pairwise_objective(gram, alpha, d, cfg.lambda);
  double objective = zero_objective;
  double step = cfg.step_size0;
  Eigen::VectorXd direction = gradient(alpha);
  double gnorm = h_norm(gram, direction);
  int t = 0;
  while (gnorm > cfg.tol && t < cfg.max_iters) {
    ++t;
    Eigen::VectorXd candidate = alpha - step * direction;
    double next = pairwise_objective(gram, candidate, d, cfg.lambda);
    check_finite_objective(next, t, "fit_pairwise");
    // Armijo-style backtracking in the RKHS metric.
    while (next > objective - 0.5 * step * gnorm * gnorm && step > 1e-300) {
      step *= 0.5;
      candidate = alpha - step * direction;
      next = pairwise_objective(gram, candidate, d, cfg.lambda);
    }
    if (!(next < objective)) break;
    alpha = std::move(candidate);
    objective = next;
    direction = gradient(alpha);
    gnorm = h_norm(gram, direction);
  }
  FitResult result{RkhsFunction(k, d.inputs(), alpha)};
  result.objective = objective;
  result.zero_objective = zero_objective;
  result.iterations = t;
  result.gradient_norm = gnorm;
  result.converged = gnorm <= cfg.tol;
  return result;
}

double clip_value(double value, double bound) {
  if (!(bound > 0.0)) throw InputError("clipping bound M must be > 0");
  return std::max(-bound, std::min(bound, value));
}

RealFunction clip(const RealFunction& f, double bound) {
  if (!(bound > 0.0)) throw InputError("clipping bound M must be > 0");
  return [f, bound](const Point& x) { return clip_value(f(x), bound); };
}

RealFunction clip(const RkhsFunction& f, double bound) { return clip(f.as_function(), bound); }

}  // namespace kdense
