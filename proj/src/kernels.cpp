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

#include "kdense/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "kdense/errors.hpp"

namespace kdense {
namespace {

std::atomic<std::uint64_t> g_mmd_clamps{0};

void check_same_dimension(const Point& x, const Point& y) {
  if (x.size() != y.size()) {
    throw InputError("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()));
  }
}

double squared_distance(const Point& x, const Point& y) { return (x - y).squaredNorm(); }

// Σ_i Σ_j w_i v_j k(x_i, y_j) accumulated row by row.
double weighted_kernel_sum(const PointKernel& k, const EmpiricalMeasure& p,
                           const EmpiricalMeasure& q) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      row += (p.weights()[i] * q.weights()[j]) *
             radial_profile(k, squared_distance(p.atoms()[i], q.atoms()[j]));
    }
    total += row;
  }
  return total;
}

}  // namespace

GaussianRbf::GaussianRbf(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InputError("GaussianRbf gamma must be finite and > 0");
  }
}

WendlandC2::WendlandC2(double support_radius) : support_radius_(support_radius) {
  if (!(support_radius > 0.0) || !std::isfinite(support_radius)) {
    throw InputError("WendlandC2 support_radius must be finite and > 0");
  }
}

MeasureGaussian::MeasureGaussian(PointKernel base, double gamma)
    : base_(std::move(base)), gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InputError("MeasureGaussian gamma must be finite and > 0");
  }
}

PointKernel as_point_kernel(const Kernel& k) {
  if (const auto* g = std::get_if<GaussianRbf>(&k)) return *g;
  if (const auto* w = std::get_if<WendlandC2>(&k)) return *w;
  throw VariantError("measure-level kernel used where a point kernel is required");
}

Kernel widen(const PointKernel& k) {
  return std::visit([](const auto& v) -> Kernel { return v; }, k);
}

std::string describe(const PointKernel& k) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* g = std::get_if<GaussianRbf>(&k)) {
    os << "GaussianRbf(gamma=" << g->gamma() << ")";
  } else {
    os << "WendlandC2(support_radius=" << std::get<WendlandC2>(k).support_radius() << ")";
  }
  return os.str();
}

std::string describe(const Kernel& k) {
  if (const auto* m = std::get_if<MeasureGaussian>(&k)) {
    std::ostringstream os;
    os.precision(17);
    os << "MeasureGaussian(base=" << describe(m->base()) << ", gamma=" << m->gamma() << ")";
    return os.str();
  }
  return describe(as_point_kernel(k));
}

double eval_kernel(const Kernel& k, const Point& x, const Point& y) {
  const PointKernel pk = as_point_kernel(k);
  check_same_dimension(x, y);
  return radial_profile(pk, squared_distance(x, y));
}

Eigen::MatrixXd gram_matrix(const Kernel& k, std::span<const Point> pts) {
  const PointKernel pk = as_point_kernel(k);
  check_points(pts);
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = radial_profile(pk, squared_distance(pts[i], pts[j]));
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  return gram;
}

Eigen::MatrixXd cross_gram_matrix(const Kernel& k, std::span<const Point> rows,
                                  std::span<const Point> cols) {
  const PointKernel pk = as_point_kernel(k);
  const Eigen::Index d = check_points(rows);
  if (check_points(cols) != d) throw InputError("dimension mismatch between point sets");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          radial_profile(pk, squared_distance(rows[i], cols[j]));
    }
  }
  return out;
}

double sup_kernel_norm(const Kernel& k, std::span<const Point> probe) {
  if (probe.empty()) throw InputError("probe set is empty");
  double best = 0.0;
  for (const Point& x : probe) best = std::max(best, std::sqrt(eval_kernel(k, x, x)));
  return best;
}

double sup_kernel_norm(const MeasureGaussian& k, std::span<const EmpiricalMeasure> probe) {
  if (probe.empty()) throw InputError("probe set is empty");
  double best = 0.0;
  for (const auto& p : probe) best = std::max(best, std::sqrt(eval_measure_kernel(k, p, p)));
  return best;
}

namespace {

double point_mmd_squared(const PointKernel& base, const EmpiricalMeasure& p,
                         const EmpiricalMeasure& q) {
  if (p.dimension() != q.dimension()) {
    throw InputError("dimension mismatch between measures: " + std::to_string(p.dimension()) +
                     " vs " + std::to_string(q.dimension()));
  }
  const double self_p = weighted_kernel_sum(base, p, p);
  const double self_q = weighted_kernel_sum(base, q, q);
  // The cross term is summed both row-major and column-major and averaged,
  // which makes the result bitwise invariant under swapping P and Q.
  const auto np = static_cast<Eigen::Index>(p.size());
  const auto nq = static_cast<Eigen::Index>(q.size());
  Eigen::MatrixXd cross(np, nq);
  for (Eigen::Index i = 0; i < np; ++i) {
    for (Eigen::Index j = 0; j < nq; ++j) {
      cross(i, j) = (p.weights()[i] * q.weights()[j]) *
                    radial_profile(base, squared_distance(p.atoms()[i], q.atoms()[j]));
    }
  }
  double by_rows = 0.0;
  for (Eigen::Index i = 0; i < np; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < nq; ++j) row += cross(i, j);
    by_rows += row;
  }
  double by_cols = 0.0;
  for (Eigen::Index j = 0; j < nq; ++j) {
    double col = 0.0;
    for (Eigen::Index i = 0; i < np; ++i) col += cross(i, j);
    by_cols += col;
  }
  const double cross_term = 0.5 * (by_rows + by_cols);
  const double mmd = (self_p + self_q) - 2.0 * cross_term;
  if (mmd < 0.0) {
    if (mmd < -1e-8) {
      throw NumericalError("MMD² = " + std::to_string(mmd) + " is negative beyond roundoff");
    }
    g_mmd_clamps.fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  return mmd;
}

}  // namespace

double mmd_squared(const Kernel& base, const EmpiricalMeasure& p, const EmpiricalMeasure& q) {
  return point_mmd_squared(as_point_kernel(base), p, q);
}

double eval_measure_kernel(const MeasureGaussian& k, const EmpiricalMeasure& p,
                           const EmpiricalMeasure& q) {
  const double g = k.gamma();
  return std::exp(-point_mmd_squared(k.base(), p, q) / (g * g));
}

Eigen::MatrixXd measure_gram_matrix(const MeasureGaussian& k,
                                    std::span<const EmpiricalMeasure> measures) {
  if (measures.empty()) throw InputError("measure set is empty");
  const auto n = static_cast<Eigen::Index>(measures.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = eval_measure_kernel(k, measures[i], measures[j]);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  return gram;
}

std::uint64_t mmd_clamp_count() noexcept { return g_mmd_clamps.load(std::memory_order_relaxed); }

}  // namespace kdense
