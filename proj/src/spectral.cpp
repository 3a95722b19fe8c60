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

#include "kdense/spectral.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "kdense/errors.hpp"

namespace kdense {
namespace {

constexpr int kFirstDigits = 100;
constexpr int kMaxDigits = 3200;

// n MPFR numbers at one precision, cleared together.
class MpArray {
 public:
  MpArray(std::size_t n, mpfr_prec_t bits) : data_(n) {
    for (auto& x : data_) mpfr_init2(&x, bits);
  }
  ~MpArray() {
    for (auto& x : data_) mpfr_clear(&x);
  }
  MpArray(const MpArray&) = delete;
  MpArray& operator=(const MpArray&) = delete;

  mpfr_ptr operator[](std::size_t i) { return &data_[i]; }

 private:
  std::vector<__mpfr_struct> data_;
};

bool has_duplicates(std::span<const Point> pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i] == pts[j]) return true;
    }
  }
  return false;
}

// Lower triangle of K − τI (row-major, n·n slots) at `bits` of precision.
// Returns the trace of K in `trace`.
void shifted_gram(const PointKernel& k, std::span<const Point> pts, mpfr_prec_t bits,
                  double tau_scale, MpArray& a, mpfr_ptr tau, mpfr_ptr trace) {
  const std::size_t n = pts.size();
  MpArray t(3, bits);
  mpfr_set_ui(trace, 0, MPFR_RNDN);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      mpfr_ptr out = a[i * n + j];
      mpfr_set_ui(t[0], 0, MPFR_RNDN);
      for (Eigen::Index c = 0; c < pts[i].size(); ++c) {
        mpfr_set_d(t[1], pts[i](c), MPFR_RNDN);
        mpfr_sub_d(t[1], t[1], pts[j](c), MPFR_RNDN);
        mpfr_sqr(t[1], t[1], MPFR_RNDN);
        mpfr_add(t[0], t[0], t[1], MPFR_RNDN);
      }
      if (const auto* g = std::get_if<GaussianRbf>(&k)) {
        mpfr_set_d(t[1], g->gamma(), MPFR_RNDN);
        mpfr_sqr(t[1], t[1], MPFR_RNDN);
        mpfr_div(t[0], t[0], t[1], MPFR_RNDN);
        mpfr_neg(t[0], t[0], MPFR_RNDN);
        mpfr_exp(out, t[0], MPFR_RNDN);
      } else {
        // (1 − r)⁴ (4r + 1) with r = ‖x − y‖ / radius.
        mpfr_sqrt(t[0], t[0], MPFR_RNDN);
        mpfr_div_d(t[0], t[0], std::get<WendlandC2>(k).support_radius(), MPFR_RNDN);
        if (mpfr_cmp_ui(t[0], 1) >= 0) {
          mpfr_set_ui(out, 0, MPFR_RNDN);
        } else {
          mpfr_ui_sub(t[1], 1, t[0], MPFR_RNDN);
          mpfr_sqr(t[1], t[1], MPFR_RNDN);
          mpfr_sqr(t[1], t[1], MPFR_RNDN);
          mpfr_mul_ui(t[2], t[0], 4, MPFR_RNDN);
          mpfr_add_ui(t[2], t[2], 1, MPFR_RNDN);
          mpfr_mul(out, t[1], t[2], MPFR_RNDN);
        }
      }
    }
    mpfr_add(trace, trace, a[i * n + i], MPFR_RNDN);
  }
  // τ = tau_scale · (n + 1) · 2^(1 − bits) · trace.
  mpfr_mul_d(tau, trace, tau_scale * static_cast<double>(n + 1), MPFR_RNDN);
  mpfr_mul_2si(tau, tau, 1 - static_cast<long>(bits), MPFR_RNDN);
  for (std::size_t i = 0; i < n; ++i) mpfr_sub(a[i * n + i], a[i * n + i], tau, MPFR_RNDN);
}

// In-place Cholesky of the lower triangle. False on a nonpositive pivot.
bool cholesky(MpArray& a, std::size_t n, mpfr_prec_t bits) {
  MpArray t(1, bits);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < n; ++i) {
      mpfr_ptr acc = a[i * n + j];
      for (std::size_t c = 0; c < j; ++c) {
        mpfr_mul(t[0], a[i * n + c], a[j * n + c], MPFR_RNDN);
        mpfr_sub(acc, acc, t[0], MPFR_RNDN);
      }
      if (i == j) {
        if (mpfr_sgn(acc) <= 0) return false;
        mpfr_sqrt(acc, acc, MPFR_RNDN);
      } else {
        mpfr_div(acc, acc, a[j * n + j], MPFR_RNDN);
      }
    }
  }
  return true;
}

// Largest eigenvalue μ of (LLᵀ)⁻¹ by power iteration.
void inverse_iteration(MpArray& l, std::size_t n, mpfr_prec_t bits, mpfr_ptr mu) {
  MpArray v(n, bits);
  MpArray t(2, bits);
  for (std::size_t i = 0; i < n; ++i) {
    mpfr_set_d(v[i], 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0), MPFR_RNDN);
  }
  double previous = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    // v ← (LLᵀ)⁻¹ v, then μ ≈ ‖v_new‖ / ‖v_old‖ with v_old normalized.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < i; ++c) {
        mpfr_mul(t[0], l[i * n + c], v[c], MPFR_RNDN);
        mpfr_sub(v[i], v[i], t[0], MPFR_RNDN);
      }
      mpfr_div(v[i], v[i], l[i * n + i], MPFR_RNDN);
    }
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t c = i + 1; c < n; ++c) {
        mpfr_mul(t[0], l[c * n + i], v[c], MPFR_RNDN);
        mpfr_sub(v[i], v[i], t[0], MPFR_RNDN);
      }
      mpfr_div(v[i], v[i], l[i * n + i], MPFR_RNDN);
    }
    mpfr_set_ui(t[1], 0, MPFR_RNDN);
    for (std::size_t i = 0; i < n; ++i) {
      mpfr_sqr(t[0], v[i], MPFR_RNDN);
      mpfr_add(t[1], t[1], t[0], MPFR_RNDN);
    }
    mpfr_sqrt(t[1], t[1], MPFR_RNDN);
    if (iter > 0) mpfr_set(mu, t[1], MPFR_RNDN);
    for (std::size_t i = 0; i < n; ++i) mpfr_div(v[i], v[i], t[1], MPFR_RNDN);
    if (iter > 0) {
      long exp = 0;
      const double mant = mpfr_get_d_2exp(&exp, mu, MPFR_RNDN);
      const double current = std::log2(mant) + static_cast<double>(exp);
      if (iter > 2 && std::abs(current - previous) < 1e-12) break;
      previous = current;
    }
  }
}

double log10_of(mpfr_srcptr x) {
  long exp = 0;
  const double mant = mpfr_get_d_2exp(&exp, x, MPFR_RNDN);
  return std::log10(mant) + static_cast<double>(exp) * std::log10(2.0);
}

// One attempt at `digits` decimal digits. Certified when the Cholesky
// factorization of K − τI succeeds.
SpectralCertificate extended_spectrum(const PointKernel& k, std::span<const Point> pts,
                                      int digits) {
  const std::size_t n = pts.size();
  const auto bits = static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873622) + 8);
  MpArray a(n * n, bits);
  MpArray s(4, bits);
  mpfr_ptr tau = s[0];
  mpfr_ptr trace = s[1];
  mpfr_ptr mu = s[2];
  mpfr_ptr lambda = s[3];
  shifted_gram(k, pts, bits, 10.0, a, tau, trace);
  SpectralCertificate cert;
  cert.digits = digits;
  cert.threshold = mpfr_get_d(tau, MPFR_RNDN);
  if (!cholesky(a, n, bits)) return cert;
  inverse_iteration(a, n, bits, mu);
  mpfr_ui_div(lambda, 1, mu, MPFR_RNDN);
  mpfr_add(lambda, lambda, tau, MPFR_RNDN);
  cert.certified = true;
  cert.min_eigenvalue = mpfr_get_d(lambda, MPFR_RNDN);
  cert.log10_min_eigenvalue = log10_of(lambda);
  return cert;
}

}  // namespace

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0) {
    throw InputError("min_eigenvalue needs a nonempty square matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return solver.eigenvalues()(0);
}

SpectralCertificate gram_spectrum(const PointKernel& k, std::span<const Point> pts,
                                  Precision precision) {
  const Eigen::MatrixXd gram = gram_matrix(widen(k), pts);
  const auto n = static_cast<double>(pts.size());
  SpectralCertificate cert;
  cert.min_eigenvalue = min_eigenvalue(gram);
  cert.threshold = 1e-12 * gram.trace() / n;
  cert.certified = cert.min_eigenvalue > cert.threshold;
  cert.log10_min_eigenvalue =
      cert.min_eigenvalue > 0.0 ? std::log10(cert.min_eigenvalue)
                                : -std::numeric_limits<double>::infinity();
  cert.digits = std::numeric_limits<double>::digits10;
  if (cert.certified || precision == Precision::kDouble || has_duplicates(pts)) return cert;

  const SpectralCertificate fallback = cert;
  for (int digits = kFirstDigits; digits <= kMaxDigits; digits *= 2) {
    cert = extended_spectrum(k, pts, digits);
    if (cert.certified) return cert;
  }
  SpectralCertificate failed = fallback;
  failed.threshold = cert.threshold;
  failed.digits = cert.digits;
  return failed;
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                          SpdSolveInfo* info) {
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n || b.size() != n) {
    throw InputError("solve_spd: shape mismatch");
  }
  const double base_jitter = 1e-12 * a.trace() / static_cast<double>(n);
  double jitter = 0.0;
  for (int step = 0; step <= 3; ++step) {
    if (step > 0) jitter = base_jitter * std::pow(10.0, step - 1);
    Eigen::MatrixXd shifted = a;
    if (jitter > 0.0) shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) continue;
    Eigen::VectorXd x = llt.solve(b);
    const Eigen::VectorXd residual = b - a * x;
    x += llt.solve(residual);
    if (!x.allFinite()) continue;
    if (info != nullptr) {
      info->jitter_steps = step;
      info->jitter = jitter;
      info->residual_norm = (a * x - b).norm();
    }
    return x;
  }
  throw NumericalError("Cholesky factorization failed after 3 jitter escalations (last jitter " +
                       std::to_string(jitter) + ")");
}

}  // namespace kdense
