// SPDX-License-Identifier: Apache-2.0
#include "fadas/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fadas/linalg.hpp"

namespace fadas {

Dataset gen_blobs(uint64_t seed, int n, int d_in, int C, double class_separation) {
  if (C < 2 || n < C || d_in < 1 || !(class_separation > 0.0)) {
    throw std::invalid_argument("gen_blobs: invalid sizes");
  }
  Rng rng(seed);
  Dataset ds;
  ds.n = n;
  ds.C = C;
  ds.features = Matrix(n, d_in);
  ds.labels.resize(n);
  // Class means sep*(c+1) along axis (c mod d_in); pairwise distance is
  // at least class_separation.
  for (int i = 0; i < n; ++i) {
    const int c = i % C;
    ds.labels[i] = c;
    double* x = ds.features.row(i);
    for (int j = 0; j < d_in; ++j) x[j] = normal01(rng);
    x[c % d_in] += class_separation * static_cast<double>(c + 1);
  }
  return ds;
}

namespace {

// Random orthogonal-similarity transform of diag(eig): two Householder
// reflections applied to the identity.
Matrix random_spd(Rng& rng, int d, const ParamVector& eig) {
  Matrix Q(d, d);
  for (int i = 0; i < d; ++i) Q.at(i, i) = 1.0;
  for (int rep = 0; rep < 2; ++rep) {
    ParamVector v(d);
    for (int i = 0; i < d; ++i) v[i] = normal01(rng);
    apply_householder(Q, v);
  }
  // B = Q diag(eig), A = B Q^T.
  Matrix B(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) B.at(i, j) = Q.at(i, j) * eig[j];
  }
  Matrix A(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += B.at(i, k) * Q.at(j, k);
      A.at(i, j) = s;
      A.at(j, i) = s;  // exact symmetry, not just up to rounding
    }
  }
  return A;
}

}  // namespace

QuadraticProblem gen_quadratic_problem(uint64_t seed, int N, int d,
                                       double heterogeneity) {
  if (N < 1 || d < 1 || heterogeneity < 0.0) {
    throw std::invalid_argument("gen_quadratic_problem: invalid sizes");
  }
  Rng rng(seed);
  QuadraticProblem p;
  p.d = d;
  ParamVector xstar(d);
  for (int i = 0; i < d; ++i) xstar[i] = normal01(rng);
  p.A.reserve(N);
  p.b.reserve(N);
  for (int i = 0; i < N; ++i) {
    ParamVector eig(d);
    for (int j = 0; j < d; ++j) eig[j] = uniform_range(rng, 0.5, 5.0);
    Matrix A = random_spd(rng, d, eig);
    ParamVector u(d);
    double norm2 = 0.0;
    for (int j = 0; j < d; ++j) {
      u[j] = normal01(rng);
      norm2 += u[j] * u[j];
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (int j = 0; j < d; ++j) u[j] *= inv;
    } else {
      u[0] = 1.0;
    }
    ParamVector xi(d);
    for (int j = 0; j < d; ++j) xi[j] = xstar[j] + heterogeneity * u[j];
    ParamVector b(d);
    matvec(A, xi.data(), b.data());
    p.A.push_back(std::move(A));
    p.b.push_back(std::move(b));
  }
  return p;
}

ParamVector global_minimizer(const QuadraticProblem& p) {
  const int d = p.d;
  Matrix S(d, d);
  ParamVector rhs(d, 0.0);
  for (size_t i = 0; i < p.A.size(); ++i) {
    Matrix G = gram(p.A[i]);
    for (int a = 0; a < d; ++a) {
      for (int c = 0; c < d; ++c) S.at(a, c) += G.at(a, c);
    }
    matvec_transpose_add(p.A[i], p.b[i].data(), rhs.data());
  }
  return cholesky_solve(S, rhs);
}

std::vector<int> largest_remainder_counts(const std::vector<double>& p, int total) {
  const int N = static_cast<int>(p.size());
  std::vector<int> quota(N);
  std::vector<std::pair<double, int>> rem(N);
  int assigned = 0;
  for (int i = 0; i < N; ++i) {
    const double share = p[i] * total;
    quota[i] = static_cast<int>(std::floor(share));
    rem[i] = {share - quota[i], i};
    assigned += quota[i];
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int k = 0; k < total - assigned; ++k) quota[rem[k].second] += 1;
  return quota;
}

Partition dirichlet_partition(const std::vector<int>& labels, int N, double alpha,
                              Rng& stream) {
  if (N < 1 || !(alpha > 0.0)) {
    throw std::invalid_argument("dirichlet_partition: invalid N or alpha");
  }
  if (static_cast<int>(labels.size()) < N) {
    throw std::invalid_argument("dirichlet_partition: fewer samples than clients");
  }
  int C = 0;
  for (int l : labels) C = std::max(C, l + 1);

  Partition part;
  part.alpha = alpha;
  part.assignment.assign(N, {});

  for (int c = 0; c < C; ++c) {
    std::vector<int> idx;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) idx.push_back(static_cast<int>(i));
    }
    if (idx.empty()) continue;
    const int nc = static_cast<int>(idx.size());
    std::vector<double> p(N);
    dirichlet_draw(stream, alpha, p.data(), p.size());
    const std::vector<int> quota = largest_remainder_counts(p, nc);

    int pos = 0;
    for (int i = 0; i < N; ++i) {
      for (int q = 0; q < quota[i]; ++q) part.assignment[i].push_back(idx[pos++]);
    }
  }

  // Repair: every client must hold at least one sample.
  for (int i = 0; i < N; ++i) {
    while (part.assignment[i].empty()) {
      int donor = -1;
      size_t best = 1;
      for (int j = 0; j < N; ++j) {
        if (part.assignment[j].size() > best) {
          best = part.assignment[j].size();
          donor = j;
        }
      }
      if (donor < 0) throw std::invalid_argument("dirichlet_partition: repair failed");
      part.assignment[i].push_back(part.assignment[donor].back());
      part.assignment[donor].pop_back();
    }
  }
  return part;
}

Dataset load_csv_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("dataset file is empty: " + path);
  // Header row fixes the column count.
  int cols = 1;
  for (char ch : line) {
    if (ch == ',') ++cols;
  }
  if (cols < 2) throw ConfigError("dataset file needs at least 2 columns: " + path);
  const int d_in = cols - 1;

  std::vector<double> feats;
  std::vector<int> labels;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        if (col < d_in) {
          const double v = std::stod(cell);
          if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
          feats.push_back(v);
        } else {
          const int l = std::stoi(cell);
          if (l < 0) throw std::invalid_argument("negative");
          labels.push_back(l);
        }
      } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": bad value \"" +
                          cell + "\"");
      }
      ++col;
    }
    if (col != cols) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(cols) + " columns, got " + std::to_string(col));
    }
  }
  if (labels.empty()) throw ConfigError("dataset file has no rows: " + path);

  Dataset ds;
  ds.n = static_cast<int>(labels.size());
  ds.C = *std::max_element(labels.begin(), labels.end()) + 1;
  ds.labels = std::move(labels);
  ds.features = Matrix(ds.n, d_in);
  std::copy(feats.begin(), feats.end(), ds.features.data.begin());
  return ds;
}

}  // namespace fadas
