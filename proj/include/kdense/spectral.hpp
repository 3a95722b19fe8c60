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

#include <span>

#include <Eigen/Core>

#include "kdense/kernels.hpp"
#include "kdense/types.hpp"

namespace kdense {

// Smallest eigenvalue of a symmetric matrix (lower triangle is read).
double min_eigenvalue(const Eigen::MatrixXd& symmetric);

enum class Precision {
  kDouble,
  // When double precision cannot certify positivity, rebuild the Gram matrix
  // in 100, 200, ... up to 3200 decimal digits and certify there.
  kExtended,
};

struct SpectralCertificate {
  double min_eigenvalue = 0.0;
  // λ_min must exceed this to count as strictly positive.
  double threshold = 0.0;
  bool certified = false;
  // Decimal digits of the arithmetic that produced min_eigenvalue.
  int digits = 0;
  // Survives underflow of min_eigenvalue in double.
  double log10_min_eigenvalue = 0.0;
};

// Smallest eigenvalue of the Gram matrix of a point kernel on `pts`, with the
// positivity threshold 1e-12·trace(K)/n in double precision. In extended
// precision with unit roundoff u, the Cholesky factorization of
// K − τI with τ = 10·(n + 1)·u·trace(K) must succeed; threshold is then τ.
// Points with exact duplicates are never retried in extended precision.
SpectralCertificate gram_spectrum(const PointKernel& k, std::span<const Point> pts,
                                  Precision precision = Precision::kDouble);

struct SpdSolveInfo {
  int jitter_steps = 0;
  double jitter = 0.0;
  double residual_norm = 0.0;
};

// Solves A x = b for symmetric positive definite A with Cholesky. On
// factorization failure adds 1e-12·trace(A)/n to the diagonal, escalating
// ×10 up to three times, then throws NumericalError. One step of iterative
// refinement is applied against the unjittered A.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                          SpdSolveInfo* info = nullptr);

}  // namespace kdense
