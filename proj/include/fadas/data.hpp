// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fadas/core.hpp"
#include "fadas/rng.hpp"

namespace fadas {

struct Dataset {
  Matrix features;          // n x d_in
  std::vector<int> labels;  // values in [0, C)
  int n = 0;
  int C = 0;
};

struct Partition {
  std::vector<std::vector<int>> assignment;  // per client, indices into the dataset
  double alpha = 0.0;
};

// Per-client least-squares objectives F_i(x) = 1/2 ||A_i x - b_i||^2.
struct QuadraticProblem {
  std::vector<Matrix> A;       // N matrices, d x d, positive definite
  std::vector<ParamVector> b;  // N vectors, length d
  int d = 0;
};

// n samples from C isotropic unit-variance Gaussians with pairwise mean
// distance >= class_separation. Labels assigned round robin, so class
// counts are balanced to within 1.
Dataset gen_blobs(uint64_t seed, int n, int d_in, int C, double class_separation);

// A_i = Q_i D_i Q_i^T with eigenvalues U[0.5, 5] (condition <= 10) and
// b_i = A_i (x* + heterogeneity * u_i), u_i unit norm. heterogeneity = 0
// makes x* the shared minimizer of every F_i.
QuadraticProblem gen_quadratic_problem(uint64_t seed, int N, int d, double heterogeneity);

// Minimizer of (1/N) sum_i F_i via the normal equations.
ParamVector global_minimizer(const QuadraticProblem& p);

// Largest-remainder rounding of p * total into integer counts that sum to
// total. Remainder ties break to the lower index.
std::vector<int> largest_remainder_counts(const std::vector<double>& p, int total);

// Label-skew Dirichlet split: per class c, p_c ~ Dir(alpha * 1_N), class
// samples divided by largest-remainder rounding (ties to the lower client
// id), then empty clients repaired by stealing one sample from the largest
// client.
Partition dirichlet_partition(const std::vector<int>& labels, int N, double alpha,
                              Rng& stream);

// Header row, last column integer label, remaining columns float features.
Dataset load_csv_dataset(const std::string& path);

}  // namespace fadas
