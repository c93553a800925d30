// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "fadas/core.hpp"
#include "fadas/data.hpp"
#include "fadas/models.hpp"
#include "fadas/rng.hpp"

namespace fadas {

enum class DelayClass { SMALL, MEDIUM, LARGE };

// Per-client runtime distributions in units of 10 seconds.
struct DelayModel {
  std::vector<DelayClass> class_of;
  double lo[3] = {0.0, 0.0, 0.0};
  double hi[3] = {0.0, 0.0, 0.0};
  double gamma = 1.0;
  bool scripted = false;
  std::map<int, std::vector<double>> script;
  std::map<int, size_t> script_pos;  // consumption cursor per client
};

// Draw p ~ Dir(gamma * 1_3) once, then assign each client independently.
std::vector<DelayClass> assign_delay_classes(int N, double gamma, Rng& stream);

DelayModel build_delay_model(const SimConfig& cfg, const RngStreams& streams);

// U(lo, hi) of the client's class; scripted models replay their sequence
// and throw SimError once it is exhausted.
double sample_runtime(int client_id, DelayModel& dm, Rng& stream);

// Everything a run needs: model spec, data, shards, initial point.
struct ProblemInstance {
  ModelSpec spec;
  Dataset train;
  Dataset test;
  Partition part;
  QuadraticProblem quad;
  ParamVector x0;
  bool classification = false;
  bool has_test = false;

  ClientData client(int i) const {
    ClientData cd;
    if (classification) {
      cd.dataset = &train;
      cd.shard = &part.assignment[i];
    } else {
      cd.A = &quad.A[i];
      cd.b = &quad.b[i];
    }
    return cd;
  }
};

ProblemInstance build_problem(const SimConfig& cfg);

struct EvalResult {
  double loss = 0.0;
  double grad_norm_sq = 0.0;
  double test_acc = 0.0;  // NaN when no test set applies
};

// Full-batch f(x) = (1/N) sum_i F_i(x), its gradient norm, test accuracy.
EvalResult global_eval(const ProblemInstance& prob, const ParamVector& x);

struct FlushRecord {
  int64_t round = 0;
  double sim_time = 0.0;
  double eta_t = 0.0;
  int64_t tau_max_t = 0;
  double train_loss = 0.0;
  double grad_norm_sq = 0.0;
  double test_acc = 0.0;  // NaN when n/a
  std::vector<int64_t> tau_list;
};

struct DelayStats {
  int64_t tau_max = 0;
  double tau_avg = 0.0;
  int64_t tau_median = 0;
};

struct RunTrace {
  std::vector<FlushRecord> records;
  DelayStats stats;
  ParamVector x_final;
};

// tau_max over every recorded tau; tau_avg = mean of per-round tau_max_t;
// tau_median = lower median of per-round tau_max_t.
DelayStats delay_stats(const RunTrace& trace);

// Test instrumentation. on_arrival fires per completion before buffering,
// on_flush after each recorded round with the post-step model. on_dispatch
// fires at every async dispatch (warmup and replacement); on_group once per
// distinct event time, before its completions are processed. delay_model,
// when set, replaces the profile-derived one.
struct EngineHooks {
  std::function<void(int client_id, int64_t tau, int64_t round)> on_arrival;
  std::function<void(const FlushRecord&, const ParamVector& x)> on_flush;
  std::function<void(int client_id, int64_t round)> on_dispatch;
  std::function<void(double now)> on_group;
  const DelayModel* delay_model = nullptr;
};

// Event-driven buffered-async run (FADAS, FADAS_DA, FEDBUFF, FEDASYNC).
RunTrace run_async(const SimConfig& cfg, const EngineHooks* hooks = nullptr);

// Round-synchronous run (FEDAVG, FEDAMS).
RunTrace run_sync(const SimConfig& cfg, const EngineHooks* hooks = nullptr);

// Validates and dispatches on cfg.algorithm.
RunTrace run_simulation(const SimConfig& cfg);

}  // namespace fadas
