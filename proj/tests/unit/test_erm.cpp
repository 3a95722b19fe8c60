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

#include <doctest.h>

#include <cmath>
#include <random>

#include "kdense/erm.hpp"
#include "kdense/errors.hpp"
#include "oracles.hpp"

using namespace kdense;

namespace {

Dataset random_dataset(std::mt19937_64& g, std::size_t n, int d, double y_scale = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> yv(-y_scale, y_scale);
  std::vector<Point> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < n; ++i) {
    Point p(d);
    for (int j = 0; j < d; ++j) p(j) = u(g);
    x.push_back(p);
    y.push_back(yv(g));
  }
  return Dataset(x, y);
}

// (1/n²) Σᵢ Σⱼ ((yᵢ − yⱼ) − (fᵢ − fⱼ))² + λ αᵀKα by the double sum.
double pairwise_brute(const Eigen::MatrixXd& k, const Eigen::VectorXd& a, const Dataset& d,
                      double lambda) {
  const Eigen::VectorXd f = k * a;
  const auto& y = d.outputs();
  const std::size_t n = d.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = (y[i] - y[j]) - (f(static_cast<Eigen::Index>(i)) -
                                        f(static_cast<Eigen::Index>(j)));
      s += r * r;
    }
  }
  return s / static_cast<double>(n * n) + lambda * a.dot(k * a);
}

}  // namespace

TEST_CASE("loss values and subgradients") {
  const auto sq = LossFunction::squared(2.0);
  CHECK(sq.value(1.0, -1.0) == 4.0);
  CHECK(sq.lipschitz_constant() == 8.0);
  const auto ab = LossFunction::absolute();
  CHECK(ab.value(-1.0, 0.5) == 1.5);
  CHECK(ab.derivative(0.0, 0.0) == 1.0);
  const auto pb = LossFunction::pinball(0.9);
  CHECK(pb.value(1.0, 0.0) == doctest::Approx(0.9));
  CHECK(pb.value(0.0, 1.0) == doctest::Approx(0.1));
  CHECK(pb.lipschitz_constant() == 0.9);
  CHECK(pb.derivative(1.0, 1.0) == doctest::Approx(0.1));
  CHECK_THROWS_AS(LossFunction::pinball(0.0), InputError);
  CHECK_THROWS_AS(LossFunction::pinball(1.0), InputError);
  CHECK_THROWS_AS(LossFunction::squared(0.0), InputError);
}

TEST_CASE("fit config validation") {
  FitConfig c;
  CHECK_NOTHROW(c.validate());
  c.lambda = -1.0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = FitConfig{};
  c.max_iters = 0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = FitConfig{};
  c.tol = 0.0;
  CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("empirical risk examples") {
  const Dataset d({make_point({0.0}), make_point({1.0})}, {1.0, -1.0});
  const RealFunction zero = [](const Point&) { return 0.0; };
  CHECK(empirical_risk(zero, d, LossFunction::absolute()) == 1.0);
  const Dataset one({make_point({0.0})}, {1.0});
  CHECK(empirical_risk(zero, one, LossFunction::pinball(0.9)) == doctest::Approx(0.9));
  const RealFunction interp = [](const Point& x) { return x(0) == 0.0 ? 1.0 : -1.0; };
  for (const auto& loss : {LossFunction::squared(), LossFunction::absolute(),
                           LossFunction::pinball(0.3)}) {
    CHECK(empirical_risk(interp, d, loss) == 0.0);
  }
}

TEST_CASE("ridge closed forms") {
  const Dataset d({make_point({0.0})}, {2.0});
  const RkhsFunction f = fit_kernel_ridge(d, GaussianRbf(1.0), 1.0);
  CHECK(f.coefficients()(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f(make_point({0.0})) == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 g(6);
  Dataset r = random_dataset(g, 30, 2);
  const Dataset zero(r.inputs(), std::vector<double>(30, 0.0));
  const RkhsFunction f0 = fit_kernel_ridge(zero, GaussianRbf(0.4), 1e-3);
  CHECK(f0.coefficients().cwiseAbs().maxCoeff() == 0.0);

  const RkhsFunction big = fit_kernel_ridge(r, GaussianRbf(0.4), 1e6);
  const Eigen::Map<const Eigen::VectorXd> y(r.outputs().data(), 30);
  CHECK(big.coefficients().norm() <= y.norm() / (30 * 1e6) * (1 + 1e-12));
  CHECK(std::abs(big(make_point({0.5, 0.5}))) < 1e-5);

  CHECK_THROWS_AS(fit_kernel_ridge(r, GaussianRbf(0.4), 0.0), InputError);
}

TEST_CASE("ridge residual certificate and representer structure") {
  std::mt19937_64 g(14);
  for (int t = 0; t < 25; ++t) {
    const std::size_t n = 5 + static_cast<std::size_t>(t * 7);
    const Dataset d = random_dataset(g, n, 1 + t % 3);
    const double lambda = std::pow(10.0, -1.0 - (t % 6));
    SpdSolveInfo info;
    const RkhsFunction f = fit_kernel_ridge(d, GaussianRbf(0.3), lambda, &info);
    CHECK(f.centers() == d.inputs());
    const Eigen::MatrixXd k = f.gram();
    const Eigen::Map<const Eigen::VectorXd> y(d.outputs().data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd res =
        (k + static_cast<double>(n) * lambda * Eigen::MatrixXd::Identity(k.rows(), k.cols())) *
            f.coefficients() -
        y;
    CHECK(res.norm() <= 1e-8 * (y.norm() + 1.0));
  }
}

TEST_CASE("subgradient solver") {
  std::mt19937_64 g(15);
  const Dataset base = random_dataset(g, 40, 1);

  SUBCASE("zero labels") {
    const Dataset zero(base.inputs(), std::vector<double>(40, 0.0));
    FitConfig cfg;
    const FitResult r = fit_lipschitz_erm(zero, GaussianRbf(0.3), LossFunction::absolute(), cfg);
    CHECK(r.objective <= r.zero_objective);
    CHECK(r.zero_objective == 0.0);
    for (double v : r.function.evaluate(zero.inputs())) CHECK(std::abs(v) <= cfg.tol);
  }

  SUBCASE("pinball at one half is half the absolute loss") {
    // ½·J_abs(λ) = J_pin(λ/2): the same iterates with the step doubled.
    FitConfig abs_cfg;
    abs_cfg.lambda = 1e-2;
    abs_cfg.max_iters = 400;
    FitConfig pin_cfg = abs_cfg;
    pin_cfg.lambda = abs_cfg.lambda / 2.0;
    pin_cfg.step_size0 = abs_cfg.step_size0 * 2.0;
    const FitResult a = fit_lipschitz_erm(base, GaussianRbf(0.3), LossFunction::absolute(), abs_cfg);
    const FitResult p =
        fit_lipschitz_erm(base, GaussianRbf(0.3), LossFunction::pinball(0.5), pin_cfg);
    const auto fa = a.function.evaluate(base.inputs());
    const auto fp = p.function.evaluate(base.inputs());
    for (std::size_t i = 0; i < fa.size(); ++i) CHECK(std::abs(fa[i] - fp[i]) <= 10 * abs_cfg.tol);
    CHECK(p.objective == doctest::Approx(a.objective / 2.0).epsilon(1e-12));
  }

  SUBCASE("squared loss against the closed form") {
    const Dataset small = random_dataset(g, 30, 1);
    FitConfig cfg;
    cfg.lambda = 1e-2;
    cfg.max_iters = 20000;
    const RkhsFunction ridge = fit_kernel_ridge(small, GaussianRbf(0.3), cfg.lambda);
    const double opt = regularized_objective(ridge.gram(), ridge.coefficients(), small,
                                             LossFunction::squared(), cfg.lambda);
    const FitResult r = fit_lipschitz_erm(small, GaussianRbf(0.3), LossFunction::squared(), cfg);
    CHECK(r.objective >= opt * (1 - 1e-12));
    CHECK((r.objective - opt) / opt <= 1e-4);
    CHECK(r.function.centers() == small.inputs());
  }

  SUBCASE("never worse than zero") {
    for (int t = 0; t < 20; ++t) {
      const Dataset d = random_dataset(g, 10 + static_cast<std::size_t>(t), 2, 3.0);
      FitConfig cfg;
      cfg.max_iters = 50;
      cfg.step_size0 = 5.0;
      cfg.lambda = 1e-4;
      for (const auto& loss : {LossFunction::absolute(), LossFunction::pinball(0.2),
                               LossFunction::squared(3.0)}) {
        const FitResult r = fit_lipschitz_erm(d, WendlandC2(0.5), loss, cfg);
        CHECK(r.objective <= r.zero_objective);
      }
    }
  }
}

TEST_CASE("pairwise objective against the double sum") {
  std::mt19937_64 g(19);
  for (int t = 0; t < 20; ++t) {
    const Dataset d = random_dataset(g, 3 + static_cast<std::size_t>(t), 2);
    const Eigen::MatrixXd k = gram_matrix(GaussianRbf(0.5), d.inputs());
    Eigen::VectorXd a = Eigen::VectorXd::Random(k.rows());
    CHECK(pairwise_objective(k, a, d, 0.01) ==
          doctest::Approx(pairwise_brute(k, a, d, 0.01)).epsilon(1e-12));
  }
}

TEST_CASE("pairwise solver") {
  std::mt19937_64 g(20);
  const Dataset r = random_dataset(g, 25, 1);

  SUBCASE("constant labels") {
    const Dataset flat(r.inputs(), std::vector<double>(25, 0.7));
    FitConfig cfg;
    const FitResult f = fit_pairwise(flat, GaussianRbf(0.3), PairwiseLoss::kRankingSquared, cfg);
    CHECK(std::abs(f.objective - f.zero_objective) <= cfg.tol);
    CHECK(f.zero_objective == 0.0);
  }

  SUBCASE("two separated points") {
    const Dataset two({make_point({0.0}), make_point({50.0})}, {0.0, 1.0});
    FitConfig cfg;
    cfg.lambda = 1e-4;
    cfg.max_iters = 20000;
    const FitResult f = fit_pairwise(two, GaussianRbf(1.0), PairwiseLoss::kRankingSquared, cfg);
    const double diff = f.function(make_point({0.0})) - f.function(make_point({50.0}));
    CHECK(std::abs(diff - (-1.0)) < 0.1);
  }

  SUBCASE("heavy penalty") {
    FitConfig cfg;
    cfg.lambda = 1e6;
    const FitResult f = fit_pairwise(r, GaussianRbf(0.3), PairwiseLoss::kRankingSquared, cfg);
    for (double v : f.function.evaluate(r.inputs())) CHECK(std::abs(v) < 1e-5);
    CHECK(f.objective <= f.zero_objective);
  }

  SUBCASE("converges on random data") {
    FitConfig cfg;
    cfg.lambda = 1e-2;
    cfg.max_iters = 20000;
    cfg.tol = 1e-7;
    const FitResult f = fit_pairwise(r, GaussianRbf(0.3), PairwiseLoss::kRankingSquared, cfg);
    CHECK(f.objective <= f.zero_objective);
    CHECK(f.function.centers() == r.inputs());
    CHECK((f.converged || f.iterations == cfg.max_iters));
    CHECK(f.converged);
  }

  CHECK_THROWS_AS(fit_pairwise(Dataset({make_point({0.0})}, {1.0}), GaussianRbf(1.0),
                               PairwiseLoss::kRankingSquared, FitConfig{}),
                  InputError);
}

TEST_CASE("clipping") {
  CHECK(clip_value(3.0, 1.0) == 1.0);
  CHECK(clip_value(-5.0, 2.0) == -2.0);
  CHECK(clip_value(0.5, 1.0) == 0.5);
  CHECK_THROWS_AS(clip_value(0.5, 0.0), InputError);

  const RkhsFunction f(GaussianRbf(1.0), {make_point({0.0})}, Eigen::VectorXd::Constant(1, 4.0));
  const RealFunction c = clip(f, 1.5);
  CHECK(c(make_point({0.0})) == 1.5);
  const RealFunction cc = clip(c, 1.5);
  std::mt19937_64 g(3);
  std::normal_distribution<double> nd(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Point x = make_point({nd(g)});
    CHECK(cc(x) == c(x));
    const double a = nd(g), b = nd(g);
    CHECK(std::abs(clip_value(a, 1.0) - clip_value(b, 1.0)) <= std::abs(a - b));
  }
}

TEST_CASE("clipped risk never exceeds the raw risk") {
  std::mt19937_64 g(23);
  std::normal_distribution<double> nd(0.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    const double m = 0.5 + (t % 4);
    Dataset d = random_dataset(g, 20, 1, m);
    const RkhsFunction f(GaussianRbf(0.2), d.inputs(), Eigen::VectorXd::Random(20) * 4.0);
    for (const auto& loss : {LossFunction::squared(m), LossFunction::absolute(),
                             LossFunction::pinball(0.25)}) {
      CHECK(empirical_risk(clip(f, m), d, loss) <= empirical_risk(f.as_function(), d, loss) + 1e-12);
    }
  }
}
