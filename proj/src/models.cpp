// SPDX-License-Identifier: Apache-2.0
#include "fadas/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fadas/kernels.hpp"
#include "fadas/linalg.hpp"

namespace fadas {

int ModelSpec::param_dim() const {
  switch (kind) {
    case ModelKind::QUADRATIC:
      return d_in;
    case ModelKind::LOGISTIC:
      return C * d_in + C;
    case ModelKind::MLP:
      return hidden * d_in + hidden + C * hidden + C;
  }
  return 0;
}

namespace {

void check_dims(const ModelSpec& spec, const ParamVector& params) {
  if (static_cast<int>(params.size()) != spec.param_dim()) {
    throw std::invalid_argument("loss_and_grad: params length mismatch");
  }
}

GradEval quadratic_eval(const ModelSpec& spec, const ParamVector& x,
                        const ClientData& data) {
  const kernels::Kernels& k = kernels::active();
  const Matrix& A = *data.A;
  const ParamVector& b = *data.b;
  const int d = A.cols;
  ParamVector r(d);
  matvec(A, x.data(), r.data());
  for (int i = 0; i < d; ++i) r[i] -= b[i];
  GradEval out;
  out.loss = 0.5 * k.dot(r.size(), r.data(), r.data());
  out.grad.assign(d, 0.0);
  matvec_transpose_add(A, r.data(), out.grad.data());
  if (spec.l2 > 0.0) {
    out.loss += 0.5 * spec.l2 * k.dot(x.size(), x.data(), x.data());
    k.axpy(x.size(), spec.l2, x.data(), out.grad.data());
  }
  return out;
}

// Stable log-sum-exp of scores; writes softmax probabilities into probs.
double softmax_loss(const double* z, int C, int label, double* probs) {
  double zmax = z[0];
  for (int c = 1; c < C; ++c) zmax = std::max(zmax, z[c]);
  double sum = 0.0;
  for (int c = 0; c < C; ++c) {
    probs[c] = std::exp(z[c] - zmax);
    sum += probs[c];
  }
  for (int c = 0; c < C; ++c) probs[c] /= sum;
  return std::log(sum) - (z[label] - zmax);
}

GradEval logistic_eval(const ModelSpec& spec, const ParamVector& params,
                       const std::vector<int>& batch, const ClientData& data) {
  const kernels::Kernels& k = kernels::active();
  const Dataset& ds = *data.dataset;
  const size_t d_in = static_cast<size_t>(spec.d_in);
  const int C = spec.C;
  const double* W = params.data();
  const double* bias = params.data() + C * d_in;

  GradEval out;
  out.grad.assign(params.size(), 0.0);
  double* gW = out.grad.data();
  double* gbias = out.grad.data() + C * d_in;

  std::vector<double> z(C), probs(C);
  for (int idx : batch) {
    const double* x = ds.features.row(idx);
    for (int c = 0; c < C; ++c) {
      z[c] = k.dot(d_in, W + c * d_in, x) + bias[c];
    }
    const int y = ds.labels[idx];
    out.loss += softmax_loss(z.data(), C, y, probs.data());
    for (int c = 0; c < C; ++c) {
      const double dz = probs[c] - (c == y ? 1.0 : 0.0);
      k.axpy(d_in, dz, x, gW + c * d_in);
      gbias[c] += dz;
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  out.loss *= inv;
  k.scal(out.grad.size(), inv, out.grad.data());
  if (spec.l2 > 0.0) {
    out.loss += 0.5 * spec.l2 * k.dot(params.size(), params.data(), params.data());
    k.axpy(params.size(), spec.l2, params.data(), out.grad.data());
  }
  return out;
}

struct MlpLayout {
  const double *W1, *b1, *W2, *b2;
  size_t oW1, ob1, oW2, ob2;

  MlpLayout(const ModelSpec& spec, const double* p) {
    const size_t h = spec.hidden, d = spec.d_in, C = spec.C;
    oW1 = 0;
    ob1 = h * d;
    oW2 = ob1 + h;
    ob2 = oW2 + C * h;
    W1 = p + oW1;
    b1 = p + ob1;
    W2 = p + oW2;
    b2 = p + ob2;
  }
};

GradEval mlp_eval(const ModelSpec& spec, const ParamVector& params,
                  const std::vector<int>& batch, const ClientData& data) {
  const kernels::Kernels& k = kernels::active();
  const Dataset& ds = *data.dataset;
  const size_t d_in = static_cast<size_t>(spec.d_in);
  const size_t H = static_cast<size_t>(spec.hidden);
  const int C = spec.C;
  const MlpLayout L(spec, params.data());

  GradEval out;
  out.grad.assign(params.size(), 0.0);
  double* g = out.grad.data();

  std::vector<double> h(H), z(C), probs(C), dh(H), da(H);
  for (int idx : batch) {
    const double* x = ds.features.row(idx);
    for (size_t j = 0; j < H; ++j) {
      h[j] = std::tanh(k.dot(d_in, L.W1 + j * d_in, x) + L.b1[j]);
    }
    for (int c = 0; c < C; ++c) {
      z[c] = k.dot(H, L.W2 + c * H, h.data()) + L.b2[c];
    }
    const int y = ds.labels[idx];
    out.loss += softmax_loss(z.data(), C, y, probs.data());

    std::fill(dh.begin(), dh.end(), 0.0);
    for (int c = 0; c < C; ++c) {
      const double dz = probs[c] - (c == y ? 1.0 : 0.0);
      k.axpy(H, dz, h.data(), g + L.oW2 + c * H);
      g[L.ob2 + c] += dz;
      k.axpy(H, dz, L.W2 + c * H, dh.data());
    }
    for (size_t j = 0; j < H; ++j) da[j] = dh[j] * (1.0 - h[j] * h[j]);
    for (size_t j = 0; j < H; ++j) {
      k.axpy(d_in, da[j], x, g + L.oW1 + j * d_in);
      g[L.ob1 + j] += da[j];
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  out.loss *= inv;
  k.scal(out.grad.size(), inv, out.grad.data());
  if (spec.l2 > 0.0) {
    out.loss += 0.5 * spec.l2 * k.dot(params.size(), params.data(), params.data());
    k.axpy(params.size(), spec.l2, params.data(), out.grad.data());
  }
  return out;
}

}  // namespace

GradEval loss_and_grad(const ModelSpec& spec, const ParamVector& params,
                       const std::vector<int>& batch, const ClientData& data) {
  check_dims(spec, params);
  if (spec.kind == ModelKind::QUADRATIC) {
    if (!data.A || !data.b) {
      throw std::invalid_argument("loss_and_grad: missing quadratic data");
    }
    return quadratic_eval(spec, params, data);
  }
  if (!data.dataset) throw std::invalid_argument("loss_and_grad: missing dataset");
  if (batch.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
  return spec.kind == ModelKind::LOGISTIC ? logistic_eval(spec, params, batch, data)
                                          : mlp_eval(spec, params, batch, data);
}

double finite_diff_check(const ModelSpec& spec, const ParamVector& params,
                         const std::vector<int>& batch, const ClientData& data,
                         double h) {
  if (params.empty()) throw std::invalid_argument("finite_diff_check: empty params");
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_check: h must be positive");
  const GradEval g = loss_and_grad(spec, params, batch, data);
  ParamVector p = params;
  double worst = 0.0;
  for (size_t j = 0; j < p.size(); ++j) {
    const double orig = p[j];
    p[j] = orig + h;
    const double lp = loss_and_grad(spec, p, batch, data).loss;
    p[j] = orig - h;
    const double lm = loss_and_grad(spec, p, batch, data).loss;
    p[j] = orig;
    const double fd = (lp - lm) / (2.0 * h);
    const double rel = std::abs(g.grad[j] - fd) / std::max(1.0, std::abs(g.grad[j]));
    worst = std::max(worst, rel);
  }
  return worst;
}

ParamVector local_sgd(const ModelSpec& spec, const ParamVector& x_start,
                      const ClientData& data, const LocalSgdParams& p, Rng& stream) {
  if (p.K < 1) throw std::invalid_argument("local_sgd: K must be >= 1");
  const kernels::Kernels& k = kernels::active();
  const bool stochastic = spec.kind != ModelKind::QUADRATIC;
  const std::vector<int>* shard = data.shard;
  if (stochastic && (!shard || shard->empty())) {
    throw std::invalid_argument("local_sgd: empty shard");
  }

  ParamVector x = x_start;
  std::vector<int> batch;
  for (int step = 0; step < p.K; ++step) {
    if (stochastic) {
      const int ns = static_cast<int>(shard->size());
      if (p.batch_size <= 0 || p.batch_size >= ns) {
        batch = *shard;
      } else {
        batch.resize(p.batch_size);
        for (int i = 0; i < p.batch_size; ++i) {
          batch[i] = (*shard)[uniform_int(stream, static_cast<uint64_t>(ns))];
        }
      }
    }
    const GradEval g = loss_and_grad(spec, x, batch, data);
    k.axpy(x.size(), -p.eta_l, g.grad.data(), x.data());
  }
  for (size_t i = 0; i < x.size(); ++i) x[i] -= x_start[i];
  return x;
}

ParamVector init_params(const ModelSpec& spec, Rng& rng) {
  ParamVector p(spec.param_dim(), 0.0);
  if (spec.kind == ModelKind::MLP) {
    const double s1 = 1.0 / std::sqrt(static_cast<double>(spec.d_in));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(spec.hidden));
    size_t off = 0;
    for (int j = 0; j < spec.hidden * spec.d_in; ++j) p[off++] = s1 * normal01(rng);
    off += spec.hidden;  // b1 stays zero
    for (int j = 0; j < spec.C * spec.hidden; ++j) p[off++] = s2 * normal01(rng);
  }
  return p;
}

double accuracy(const ModelSpec& spec, const ParamVector& params, const Dataset& ds) {
  if (spec.kind == ModelKind::QUADRATIC) return 0.0;
  const kernels::Kernels& k = kernels::active();
  const int C = spec.C;
  const size_t d_in = static_cast<size_t>(spec.d_in);
  const size_t H = static_cast<size_t>(spec.hidden);
  std::vector<double> z(C), h(H);
  int correct = 0;
  for (int i = 0; i < ds.n; ++i) {
    const double* x = ds.features.row(i);
    if (spec.kind == ModelKind::LOGISTIC) {
      const double* W = params.data();
      const double* bias = params.data() + C * d_in;
      for (int c = 0; c < C; ++c) {
        z[c] = k.dot(d_in, W + c * d_in, x) + bias[c];
      }
    } else {
      const MlpLayout L(spec, params.data());
      for (size_t j = 0; j < H; ++j) {
        h[j] = std::tanh(k.dot(d_in, L.W1 + j * d_in, x) + L.b1[j]);
      }
      for (int c = 0; c < C; ++c) {
        z[c] = k.dot(H, L.W2 + c * H, h.data()) + L.b2[c];
      }
    }
    int best = 0;
    for (int c = 1; c < C; ++c) {
      if (z[c] > z[best]) best = c;
    }
    if (best == ds.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.n);
}

}  // namespace fadas
