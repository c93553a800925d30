// SPDX-License-Identifier: Apache-2.0
#if defined(__AVX2__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "fadas/kernels.hpp"

// _mm256_sqrt_pd / _mm256_div_pd / _mm256_max_pd are IEEE-exact, so every
// vector lane computes the same bits as the scalar kernel. Multiplies and
// adds are kept separate (no FMA) to match -ffp-contract=off scalar code.

namespace fadas::kernels {
namespace {

void axpy(std::size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    __m256d vx = _mm256_loadu_pd(x + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scal(std::size_t n, double a, double* x) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] = a * x[i];
}

void add(std::size_t n, const double* x, const double* y, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] + y[i];
}

void lerp(std::size_t n, double a, const double* x, const double* y,
          double* out) {
  const double b = 1.0 - a;
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_add_pd(_mm256_mul_pd(vb, _mm256_loadu_pd(x + i)),
                              _mm256_mul_pd(va, _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(out + i, t);
  }
  for (; i < n; ++i) out[i] = b * x[i] + a * y[i];
}

void amsgrad_update(std::size_t n, double beta1, double beta2,
                    const double* delta, double* m, double* v, double* vhat) {
  const double c1s = 1.0 - beta1;
  const double c2s = 1.0 - beta2;
  const __m256d b1 = _mm256_set1_pd(beta1);
  const __m256d b2 = _mm256_set1_pd(beta2);
  const __m256d c1 = _mm256_set1_pd(c1s);
  const __m256d c2 = _mm256_set1_pd(c2s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_loadu_pd(delta + i);
    __m256d vm = _mm256_loadu_pd(m + i);
    vm = _mm256_add_pd(_mm256_mul_pd(b1, vm), _mm256_mul_pd(c1, d));
    _mm256_storeu_pd(m + i, vm);
    __m256d vv = _mm256_loadu_pd(v + i);
    vv = _mm256_add_pd(_mm256_mul_pd(b2, vv),
                       _mm256_mul_pd(c2, _mm256_mul_pd(d, d)));
    _mm256_storeu_pd(v + i, vv);
    __m256d vh = _mm256_loadu_pd(vhat + i);
    _mm256_storeu_pd(vhat + i, _mm256_max_pd(vh, vv));
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
  const __m256d veta = _mm256_set1_pd(eta);
  const __m256d veps = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d num = _mm256_mul_pd(veta, _mm256_loadu_pd(m + i));
    const __m256d den =
        _mm256_add_pd(_mm256_sqrt_pd(_mm256_loadu_pd(vhat + i)), veps);
    __m256d vx = _mm256_loadu_pd(x + i);
    vx = _mm256_add_pd(vx, _mm256_div_pd(num, den));
    _mm256_storeu_pd(x + i, vx);
  }
  for (; i < n; ++i) {
    x[i] = x[i] + (eta * m[i]) / (std::sqrt(vhat[i]) + eps);
  }
}

// Lane j of the accumulator holds indices ≡ j (mod 4); horizontal combine is
// (l0 + l2) + (l1 + l3), matching the scalar blocked reduction.
inline double hsum_blocked(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);     // (l0, l1)
  const __m128d hi = _mm256_extractf128_pd(acc, 1);   // (l2, l3)
  const __m128d s = _mm_add_pd(lo, hi);               // (l0+l2, l1+l3)
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

double dot(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t nb = n - n % 4;
  for (std::size_t i = 0; i < nb; i += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  double s = hsum_blocked(acc);
  for (std::size_t i = nb; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum(std::size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t nb = n - n % 4;
  for (std::size_t i = 0; i < nb; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double s = hsum_blocked(acc);
  for (std::size_t i = nb; i < n; ++i) s += x[i];
  return s;
}

}  // namespace

const Kernels avx2_kernels = {
    "avx2", axpy, scal, add, lerp, amsgrad_update, adaptive_step, dot, sum,
};

}  // namespace fadas::kernels

#endif  // __AVX2__
