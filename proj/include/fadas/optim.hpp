// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "fadas/core.hpp"

namespace fadas {

struct ServerOptState {
  ParamVector x;     // global model x_t
  ParamVector m;     // first moment
  ParamVector v;     // second moment
  ParamVector vhat;  // running elementwise max of v
  int64_t t = 1;
};

ServerOptState init_server_state(ParamVector x0);

struct PseudoGradient {
  ParamVector delta;     // averaged buffer contents
  int64_t tau_max_t = 0;  // max delay among contributing updates
};

struct StepResult {
  ServerOptState state;
  double eta_t = 0.0;
};

// tau_max_t <= tau_c keeps eta; above the threshold MAIN_TEXT clips to
// min(eta, 1/tau) and APPENDIX scales to min(eta, eta/tau).
double delay_adaptive_lr(double eta, int64_t tau_max_t, int64_t tau_c, EtaRule rule);

// AMSGrad-style transition:
//   m' = b1 m + (1-b1) delta, v' = b2 v + (1-b2) delta^2,
//   vhat' = max(vhat, v'), x' = x + eta_t m' / (sqrt(vhat') + eps).
StepResult fadas_step(const ServerOptState& state, const PseudoGradient& pg,
                      const HyperParams& hyper, EtaRule rule, bool delay_adaptive);

// x' = x + eta * delta_avg.
ParamVector fedbuff_step(const ParamVector& x, const ParamVector& delta_avg,
                         double eta);

// a_t = alpha_base * (tau+1)^(-staleness_exponent).
double fedasync_alpha(double alpha_base, int64_t tau, double staleness_exponent);

// x' = (1-a_t) x + a_t x_new.
ParamVector fedasync_step(const ParamVector& x, const ParamVector& x_new,
                          double alpha_base, int64_t tau, double staleness_exponent);

// x' = x + mean(deltas).
ParamVector fedavg_aggregate(const ParamVector& x,
                             const std::vector<ParamVector>& deltas);

// Same recursion as fadas_step with delay_adaptive off, fed mean(deltas).
ServerOptState fedams_sync_step(const ServerOptState& state,
                                const std::vector<ParamVector>& deltas,
                                const HyperParams& hyper);

// Mean of a delta list in list order; shared by the buffered paths so the
// sync and async pipelines sum in exactly the same sequence.
ParamVector mean_delta(const std::vector<ParamVector>& deltas);

}  // namespace fadas
