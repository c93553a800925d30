// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fadas {

// Sub-seed derivation. The exact chain is a contract (tests replay it
// independently):
//   h = splitmix64(master ^ fnv1a64(label))
//   h = splitmix64(h ^ i)
//   h = splitmix64(h ^ j)
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t z);
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t i = 0, std::uint64_t j = 0);

// mt19937_64 raw output is pinned by the standard; the distribution mappings
// below are hand-rolled because the <random> distributions are not.
using Rng = std::mt19937_64;

// Uniform in [0, 1), 53-bit resolution.
double uniform01(Rng& rng);
// Uniform in [lo, hi).
double uniform_range(Rng& rng, double lo, double hi);
// Uniform integer in [0, n); rejection-debiased. n >= 1.
std::uint64_t uniform_int(Rng& rng, std::uint64_t n);
// Standard normal via Box-Muller (two uniforms per draw, cosine branch only).
double normal01(Rng& rng);
// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
double gamma_draw(Rng& rng, double shape);
// Dirichlet(concentration * 1_k) proportion vector, k = out_size.
void dirichlet_draw(Rng& rng, double concentration, double* out,
                    std::size_t out_size);

// Named-stream registry over a single master seed. Streams with distinct
// labels or indices never share a generator state.
class RngStreams {
 public:
  explicit RngStreams(std::uint64_t master_seed) : master_(master_seed) {}

  std::uint64_t master_seed() const { return master_; }

  // label must be one of: "partition", "delay_class", "runtime",
  // "client_sampling", "minibatch". Throws std::invalid_argument otherwise.
  Rng derive(std::string_view label, std::uint64_t i = 0,
             std::uint64_t j = 0) const;

 private:
  std::uint64_t master_;
};

}  // namespace fadas
