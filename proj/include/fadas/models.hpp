// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "fadas/core.hpp"
#include "fadas/data.hpp"
#include "fadas/rng.hpp"

namespace fadas {

struct ModelSpec {
  ModelKind kind = ModelKind::LOGISTIC;
  int d_in = 1;    // problem dimension d for QUADRATIC
  int C = 2;       // classes (ignored for QUADRATIC)
  int hidden = 8;  // MLP only
  double l2 = 0.0;

  // Parameter layouts:
  //   QUADRATIC: x (d_in)
  //   LOGISTIC:  W (C x d_in) row-major, then bias (C)
  //   MLP:       W1 (hidden x d_in), b1 (hidden), W2 (C x hidden), b2 (C)
  int param_dim() const;
};

struct GradEval {
  double loss = 0.0;
  ParamVector grad;
};

// What a client trains on: a dataset shard for classification models, or
// the client's (A, b) pair for QUADRATIC.
struct ClientData {
  const Dataset* dataset = nullptr;
  const std::vector<int>* shard = nullptr;
  const Matrix* A = nullptr;
  const ParamVector* b = nullptr;
};

// loss = mean per-sample loss over batch + (l2/2)||params||^2, grad exact.
// QUADRATIC ignores batch (the objective is deterministic).
GradEval loss_and_grad(const ModelSpec& spec, const ParamVector& params,
                       const std::vector<int>& batch, const ClientData& data);

// Max over coordinates of |analytic - central difference| / max(1, |analytic|).
double finite_diff_check(const ModelSpec& spec, const ParamVector& params,
                         const std::vector<int>& batch, const ClientData& data,
                         double h);

struct LocalSgdParams {
  double eta_l = 0.01;
  int K = 1;
  int batch_size = 0;  // 0 = full shard
};

// K steps of minibatch SGD from x_start; batches drawn with replacement
// from the stream. Returns delta = x_final - x_start.
ParamVector local_sgd(const ModelSpec& spec, const ParamVector& x_start,
                      const ClientData& data, const LocalSgdParams& p, Rng& stream);

// Zeros for QUADRATIC and LOGISTIC; scaled normal weights, zero biases for MLP.
ParamVector init_params(const ModelSpec& spec, Rng& rng);

// Fraction of samples whose argmax score matches the label (classification only).
double accuracy(const ModelSpec& spec, const ParamVector& params, const Dataset& ds);

}  // namespace fadas
