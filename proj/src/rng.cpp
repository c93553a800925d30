// SPDX-License-Identifier: Apache-2.0
#include "fadas/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fadas {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t i, std::uint64_t j) {
  std::uint64_t h = splitmix64(master ^ fnv1a64(label));
  h = splitmix64(h ^ i);
  h = splitmix64(h ^ j);
  return h;
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_range(Rng& rng, double lo, double hi) {
  return lo + uniform01(rng) * (hi - lo);
}

std::uint64_t uniform_int(Rng& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be >= 1");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

double normal01(Rng& rng) {
  // u1 in (0, 1] so the log is finite.
  const double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double gamma_draw(Rng& rng, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma_draw: shape <= 0");
  if (shape < 1.0) {
    const double u = uniform01(rng);
    // Boost from shape+1; u == 0 would stall at zero mass, nudge it.
    const double boost = std::pow(u > 0.0 ? u : 0x1.0p-53, 1.0 / shape);
    return gamma_draw(rng, shape + 1.0) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal01(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01(rng);
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

void dirichlet_draw(Rng& rng, double concentration, double* out,
                    std::size_t out_size) {
  double total = 0.0;
  for (std::size_t i = 0; i < out_size; ++i) {
    out[i] = gamma_draw(rng, concentration);
    total += out[i];
  }
  if (total <= 0.0) {
    // All-zero draws are possible only for tiny concentrations; fall back to
    // a point mass on index 0 (a degenerate but valid proportion vector).
    out[0] = 1.0;
    for (std::size_t i = 1; i < out_size; ++i) out[i] = 0.0;
    return;
  }
  for (std::size_t i = 0; i < out_size; ++i) out[i] /= total;
}

Rng RngStreams::derive(std::string_view label, std::uint64_t i,
                       std::uint64_t j) const {
  static constexpr std::string_view kLabels[] = {
      "partition", "delay_class", "runtime", "client_sampling", "minibatch"};
  bool known = false;
  for (auto l : kLabels) known = known || (l == label);
  if (!known) {
    throw std::invalid_argument("unknown rng stream label: " +
                                std::string(label));
  }
  return Rng(derive_seed(master_, label, i, j));
}

}  // namespace fadas
