// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "fadas/core.hpp"

namespace fadas {

// y = A x, A is (rows x cols) row-major.
void matvec(const Matrix& A, const double* x, double* y);

// y += A^T x. Walks A row-wise so the per-row kernel axpy applies.
void matvec_transpose_add(const Matrix& A, const double* x, double* y);

// C = A^T A (cols x cols), symmetric.
Matrix gram(const Matrix& A);

// Solves S x = b for symmetric positive definite S via Cholesky.
// Throws SimError if S is not positive definite.
ParamVector cholesky_solve(const Matrix& S, const ParamVector& b);

// Applies the Householder reflection H = I - 2 v v^T / (v^T v) to each
// column of A in place (A <- H A).
void apply_householder(Matrix& A, const ParamVector& v);

}  // namespace fadas
