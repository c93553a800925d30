// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fadas::kernels {

// Vector kernels over contiguous double arrays. Every backend (scalar, AVX2,
// NEON) must produce bit-identical results, so the semantics below are pinned
// exactly:
//
//   axpy            y[i] = y[i] + a * x[i]
//   scal            x[i] = a * x[i]
//   add             out[i] = x[i] + y[i]
//   lerp            out[i] = (1-a) * x[i] + a * y[i]      ((1-a) computed once)
//   amsgrad_update  m[i]    = b1 * m[i] + (1-b1) * d[i]
//                   v[i]    = b2 * v[i] + (1-b2) * (d[i] * d[i])
//                   vhat[i] = max(vhat[i], v[i])
//   adaptive_step   x[i] = x[i] + (eta * m[i]) / (sqrt(vhat[i]) + eps)
//
// Reductions (dot, sum) use a 4-lane blocked accumulation: lane j holds the
// partial sum of elements with index ≡ j (mod 4) over the first n - n%4
// elements, lanes combine as (l0 + l2) + (l1 + l3), and the tail is added in
// index order. No FMA anywhere: each multiply and add rounds separately.
struct Kernels {
  const char* name;
  void (*axpy)(std::size_t n, double a, const double* x, double* y);
  void (*scal)(std::size_t n, double a, double* x);
  void (*add)(std::size_t n, const double* x, const double* y, double* out);
  void (*lerp)(std::size_t n, double a, const double* x, const double* y,
               double* out);
  void (*amsgrad_update)(std::size_t n, double beta1, double beta2,
                         const double* delta, double* m, double* v,
                         double* vhat);
  void (*adaptive_step)(std::size_t n, double eta, const double* m,
                        const double* vhat, double eps, double* x);
  double (*dot)(std::size_t n, const double* x, const double* y);
  double (*sum)(std::size_t n, const double* x);
};

extern const Kernels scalar_kernels;
#if defined(__AVX2__) || defined(FADAS_HAVE_AVX2_TU)
extern const Kernels avx2_kernels;
#endif
#if defined(__ARM_NEON) || defined(FADAS_HAVE_NEON_TU)
extern const Kernels neon_kernels;
#endif

// Active backend. Picked once: FADAS_SIM_KERNEL env var ("scalar", "avx2",
// "neon", "auto") if set, otherwise the widest backend the CPU supports.
const Kernels& active();

// Force a backend by name; returns false if unknown or unavailable on this
// machine. Intended for tests and benchmarking.
bool select(std::string_view name);

std::vector<std::string> available();

}  // namespace fadas::kernels
