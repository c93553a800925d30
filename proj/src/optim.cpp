// SPDX-License-Identifier: Apache-2.0
#include "fadas/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fadas/kernels.hpp"

namespace fadas {

ServerOptState init_server_state(ParamVector x0) {
  ServerOptState s;
  const size_t d = x0.size();
  s.x = std::move(x0);
  s.m.assign(d, 0.0);
  s.v.assign(d, 0.0);
  s.vhat.assign(d, 0.0);
  s.t = 1;
  return s;
}

double delay_adaptive_lr(double eta, int64_t tau_max_t, int64_t tau_c, EtaRule rule) {
  if (!(eta > 0.0) || tau_max_t < 0 || tau_c < 0) {
    throw std::invalid_argument("delay_adaptive_lr: bad arguments");
  }
  if (tau_max_t <= tau_c) return eta;
  const double tau = static_cast<double>(tau_max_t);
  if (rule == EtaRule::MAIN_TEXT) return std::min(eta, 1.0 / tau);
  return std::min(eta, eta / tau);
}

StepResult fadas_step(const ServerOptState& state, const PseudoGradient& pg,
                      const HyperParams& hyper, EtaRule rule, bool delay_adaptive) {
  const size_t d = state.x.size();
  if (pg.delta.size() != d) throw SimError("fadas_step: delta dimension mismatch");
  if (!all_finite(pg.delta)) throw SimError("fadas_step: non-finite delta");
  const kernels::Kernels& k = kernels::active();

  StepResult out;
  out.state = state;
  k.amsgrad_update(d, hyper.beta1, hyper.beta2, pg.delta.data(), out.state.m.data(),
                   out.state.v.data(), out.state.vhat.data());
  out.eta_t = delay_adaptive
                  ? delay_adaptive_lr(hyper.eta, pg.tau_max_t, hyper.tau_c, rule)
                  : hyper.eta;
  k.adaptive_step(d, out.eta_t, out.state.m.data(), out.state.vhat.data(), hyper.eps,
                  out.state.x.data());
  out.state.t = state.t + 1;
  return out;
}

ParamVector fedbuff_step(const ParamVector& x, const ParamVector& delta_avg,
                         double eta) {
  if (x.size() != delta_avg.size()) {
    throw SimError("fedbuff_step: dimension mismatch");
  }
  ParamVector out = x;
  kernels::active().axpy(out.size(), eta, delta_avg.data(), out.data());
  return out;
}

double fedasync_alpha(double alpha_base, int64_t tau, double staleness_exponent) {
  if (!(alpha_base > 0.0) || alpha_base > 1.0 || tau < 0) {
    throw std::invalid_argument("fedasync_alpha: bad arguments");
  }
  return alpha_base * std::pow(static_cast<double>(tau) + 1.0, -staleness_exponent);
}

ParamVector fedasync_step(const ParamVector& x, const ParamVector& x_new,
                          double alpha_base, int64_t tau, double staleness_exponent) {
  if (x.size() != x_new.size()) throw SimError("fedasync_step: dimension mismatch");
  const double alpha_t = fedasync_alpha(alpha_base, tau, staleness_exponent);
  ParamVector out(x.size());
  kernels::active().lerp(x.size(), alpha_t, x.data(), x_new.data(), out.data());
  return out;
}

ParamVector mean_delta(const std::vector<ParamVector>& deltas) {
  if (deltas.empty()) throw SimError("mean_delta: empty list");
  const size_t d = deltas[0].size();
  const kernels::Kernels& k = kernels::active();
  ParamVector acc(d, 0.0);
  for (const ParamVector& dv : deltas) {
    if (dv.size() != d) throw SimError("mean_delta: dimension mismatch");
    k.axpy(d, 1.0, dv.data(), acc.data());
  }
  k.scal(d, 1.0 / static_cast<double>(deltas.size()), acc.data());
  return acc;
}

ParamVector fedavg_aggregate(const ParamVector& x,
                             const std::vector<ParamVector>& deltas) {
  if (deltas.empty()) throw SimError("fedavg_aggregate: empty list");
  const ParamVector avg = mean_delta(deltas);
  if (avg.size() != x.size()) throw SimError("fedavg_aggregate: dimension mismatch");
  ParamVector out = x;
  kernels::active().axpy(out.size(), 1.0, avg.data(), out.data());
  return out;
}

ServerOptState fedams_sync_step(const ServerOptState& state,
                                const std::vector<ParamVector>& deltas,
                                const HyperParams& hyper) {
  PseudoGradient pg;
  pg.delta = mean_delta(deltas);
  pg.tau_max_t = 0;
  return fadas_step(state, pg, hyper, EtaRule::APPENDIX, false).state;
}

}  // namespace fadas
