// SPDX-License-Identifier: Apache-2.0
#include "fadas/linalg.hpp"

#include <cmath>

#include "fadas/kernels.hpp"

namespace fadas {

void matvec(const Matrix& A, const double* x, double* y) {
  const kernels::Kernels& k = kernels::active();
  for (int i = 0; i < A.rows; ++i) {
    y[i] = k.dot(static_cast<size_t>(A.cols), A.row(i), x);
  }
}

void matvec_transpose_add(const Matrix& A, const double* x, double* y) {
  const kernels::Kernels& k = kernels::active();
  for (int i = 0; i < A.rows; ++i) {
    k.axpy(static_cast<size_t>(A.cols), x[i], A.row(i), y);
  }
}

Matrix gram(const Matrix& A) {
  const kernels::Kernels& k = kernels::active();
  Matrix C(A.cols, A.cols);
  for (int i = 0; i < A.rows; ++i) {
    const double* r = A.row(i);
    for (int a = 0; a < A.cols; ++a) {
      k.axpy(static_cast<size_t>(A.cols), r[a], r, C.row(a));
    }
  }
  return C;
}

ParamVector cholesky_solve(const Matrix& S, const ParamVector& b) {
  const int n = S.rows;
  if (S.cols != n || static_cast<int>(b.size()) != n) {
    throw SimError("cholesky_solve: dimension mismatch");
  }
  // Lower-triangular factor L with S = L L^T.
  Matrix L(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = S.at(i, j);
      for (int k = 0; k < j; ++k) s -= L.at(i, k) * L.at(j, k);
      if (i == j) {
        if (s <= 0.0) throw SimError("cholesky_solve: matrix not positive definite");
        L.at(i, i) = std::sqrt(s);
      } else {
        L.at(i, j) = s / L.at(j, j);
      }
    }
  }
  // Forward solve L y = b, then back solve L^T x = y.
  ParamVector x(b);
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int k = 0; k < i; ++k) s -= L.at(i, k) * x[k];
    x[i] = s / L.at(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n; ++k) s -= L.at(k, i) * x[k];
    x[i] = s / L.at(i, i);
  }
  return x;
}

void apply_householder(Matrix& A, const ParamVector& v) {
  const int n = A.rows;
  if (static_cast<int>(v.size()) != n) {
    throw SimError("apply_householder: dimension mismatch");
  }
  double vv = 0.0;
  for (int i = 0; i < n; ++i) vv += v[i] * v[i];
  if (vv == 0.0) return;
  const double scale = 2.0 / vv;
  for (int c = 0; c < A.cols; ++c) {
    double va = 0.0;
    for (int i = 0; i < n; ++i) va += v[i] * A.at(i, c);
    const double f = scale * va;
    for (int i = 0; i < n; ++i) A.at(i, c) -= f * v[i];
  }
}

}  // namespace fadas
