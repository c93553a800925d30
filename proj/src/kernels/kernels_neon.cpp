// SPDX-License-Identifier: Apache-2.0
#if defined(__ARM_NEON)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "fadas/kernels.hpp"

// Two float64x2_t registers stand in for the 4-lane accumulator: reg a holds
// lanes (0,1), reg b lanes (2,3). vmulq/vaddq round like scalar mul/add, and
// vsqrtq_f64/vdivq_f64 are IEEE-exact, so results match the scalar kernel
// bit for bit. vaddq+vmulq kept separate (no vfmaq) to match
// -ffp-contract=off scalar code.

namespace fadas::kernels {
namespace {

void axpy(std::size_t n, double a, const double* x, double* y) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vy = vld1q_f64(y + i);
    vy = vaddq_f64(vy, vmulq_f64(va, vld1q_f64(x + i)));
    vst1q_f64(y + i, vy);
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scal(std::size_t n, double a, double* x) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) x[i] = a * x[i];
}

void add(std::size_t n, const double* x, const double* y, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] + y[i];
}

void lerp(std::size_t n, double a, const double* x, const double* y,
          double* out) {
  const double b = 1.0 - a;
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vaddq_f64(vmulq_f64(vb, vld1q_f64(x + i)),
                                 vmulq_f64(va, vld1q_f64(y + i))));
  }
  for (; i < n; ++i) out[i] = b * x[i] + a * y[i];
}

void amsgrad_update(std::size_t n, double beta1, double beta2,
                    const double* delta, double* m, double* v, double* vhat) {
  const double c1s = 1.0 - beta1;
  const double c2s = 1.0 - beta2;
  const float64x2_t b1 = vdupq_n_f64(beta1);
  const float64x2_t b2 = vdupq_n_f64(beta2);
  const float64x2_t c1 = vdupq_n_f64(c1s);
  const float64x2_t c2 = vdupq_n_f64(c2s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vld1q_f64(delta + i);
    float64x2_t vm = vld1q_f64(m + i);
    vm = vaddq_f64(vmulq_f64(b1, vm), vmulq_f64(c1, d));
    vst1q_f64(m + i, vm);
    float64x2_t vv = vld1q_f64(v + i);
    vv = vaddq_f64(vmulq_f64(b2, vv), vmulq_f64(c2, vmulq_f64(d, d)));
    vst1q_f64(v + i, vv);
    vst1q_f64(vhat + i, vmaxq_f64(vld1q_f64(vhat + i), vv));
  }
  for (; i < n; ++i) {
    const double d = delta[i];
    m[i] = beta1 * m[i] + c1s * d;
    v[i] = beta2 * v[i] + c2s * (d * d);
    vhat[i] = std::max(vhat[i], v[i]);
  }
}

void adaptive_step(std::size_t n, double eta, const double* m,
                   const double* vhat, double eps, double* x) {
  const float64x2_t veta = vdupq_n_f64(eta);
  const float64x2_t veps = vdupq_n_f64(eps);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t num = vmulq_f64(veta, vld1q_f64(m + i));
    const float64x2_t den = vaddq_f64(vsqrtq_f64(vld1q_f64(vhat + i)), veps);
    float64x2_t vx = vld1q_f64(x + i);
    vx = vaddq_f64(vx, vdivq_f64(num, den));
    vst1q_f64(x + i, vx);
  }
  for (; i < n; ++i) {
    x[i] = x[i] + (eta * m[i]) / (std::sqrt(vhat[i]) + eps);
  }
}

double dot(std::size_t n, const double* x, const double* y) {
  float64x2_t a01 = vdupq_n_f64(0.0);  // lanes 0,1
  float64x2_t a23 = vdupq_n_f64(0.0);  // lanes 2,3
  const std::size_t nb = n - n % 4;
  for (std::size_t i = 0; i < nb; i += 4) {
    a01 = vaddq_f64(a01, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    a23 = vaddq_f64(a23, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  const float64x2_t c = vaddq_f64(a01, a23);  // (l0+l2, l1+l3)
  double s = vgetq_lane_f64(c, 0) + vgetq_lane_f64(c, 1);
  for (std::size_t i = nb; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum(std::size_t n, const double* x) {
  float64x2_t a01 = vdupq_n_f64(0.0);
  float64x2_t a23 = vdupq_n_f64(0.0);
  const std::size_t nb = n - n % 4;
  for (std::size_t i = 0; i < nb; i += 4) {
    a01 = vaddq_f64(a01, vld1q_f64(x + i));
    a23 = vaddq_f64(a23, vld1q_f64(x + i + 2));
  }
  const float64x2_t c = vaddq_f64(a01, a23);
  double s = vgetq_lane_f64(c, 0) + vgetq_lane_f64(c, 1);
  for (std::size_t i = nb; i < n; ++i) s += x[i];
  return s;
}

}  // namespace

const Kernels neon_kernels = {
    "neon", axpy, scal, add, lerp, amsgrad_update, adaptive_step, dot, sum,
};

}  // namespace fadas::kernels

#endif  // __ARM_NEON
