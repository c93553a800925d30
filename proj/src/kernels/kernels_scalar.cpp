// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstddef>

#include "fadas/kernels.hpp"

namespace fadas::kernels {
namespace {

void axpy(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scal(std::size_t n, double a, double* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] = a * x[i];
}

void add(std::size_t n, const double* x, const double* y, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + y[i];
}

void lerp(std::size_t n, double a, const double* x, const double* y,
          double* out) {
  const double b = 1.0 - a;
  for (std::size_t i = 0; i < n; ++i) out[i] = b * x[i] + a * y[i];
}

void amsgrad_update(std::size_t n, double beta1, double beta2,
                    const double* delta, double* m, double* v, double* vhat) {
  const double c1 = 1.0 - beta1;
  const double c2 = 1.0 - beta2;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = delta[i];
    m[i] = beta1 * m[i] + c1 * d;
    v[i] = beta2 * v[i] + c2 * (d * d);
    vhat[i] = std::max(vhat[i], v[i]);
  }
}

void adaptive_step(std::size_t n, double eta, const double* m,
                   const double* vhat, double eps, double* x) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = x[i] + (eta * m[i]) / (std::sqrt(vhat[i]) + eps);
  }
}

// Blocked reduction; lane layout must match the SIMD variants exactly.
double dot(std::size_t n, const double* x, const double* y) {
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  const std::size_t nb = n - n % 4;
  for (std::size_t i = 0; i < nb; i += 4) {
    acc0 += x[i] * y[i];
    acc1 += x[i + 1] * y[i + 1];
    acc2 += x[i + 2] * y[i + 2];
    acc3 += x[i + 3] * y[i + 3];
  }
  double s = (acc0 + acc2) + (acc1 + acc3);
  for (std::size_t i = nb; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum(std::size_t n, const double* x) {
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  const std::size_t nb = n - n % 4;
  for (std::size_t i = 0; i < nb; i += 4) {
    acc0 += x[i];
    acc1 += x[i + 1];
    acc2 += x[i + 2];
    acc3 += x[i + 3];
  }
  double s = (acc0 + acc2) + (acc1 + acc3);
  for (std::size_t i = nb; i < n; ++i) s += x[i];
  return s;
}

}  // namespace

const Kernels scalar_kernels = {
    "scalar", axpy, scal, add, lerp, amsgrad_update, adaptive_step, dot, sum,
};

}  // namespace fadas::kernels
