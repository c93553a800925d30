// SPDX-License-Identifier: Apache-2.0
#include "fadas/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

#include "fadas/kernels.hpp"
#include "fadas/optim.hpp"

namespace fadas {

std::vector<DelayClass> assign_delay_classes(int N, double gamma, Rng& stream) {
  if (N < 1 || !(gamma > 0.0)) {
    throw std::invalid_argument("assign_delay_classes: invalid N or gamma");
  }
  std::vector<double> p(3);
  dirichlet_draw(stream, gamma, p.data(), p.size());
  std::vector<DelayClass> out(N);
  for (int i = 0; i < N; ++i) {
    const double u = uniform01(stream);
    if (u < p[0]) {
      out[i] = DelayClass::SMALL;
    } else if (u < p[0] + p[1]) {
      out[i] = DelayClass::MEDIUM;
    } else {
      out[i] = DelayClass::LARGE;
    }
  }
  return out;
}

DelayModel build_delay_model(const SimConfig& cfg, const RngStreams& streams) {
  DelayModel dm;
  dm.gamma = cfg.gamma;
  if (cfg.delay_profile == DelayProfile::SCRIPTED) {
    dm.scripted = true;
    dm.script = cfg.scripted.runtimes;
    return dm;
  }
  dm.lo[0] = 1.0;
  dm.hi[0] = 2.0;
  dm.lo[1] = 3.0;
  dm.hi[1] = 5.0;
  if (cfg.delay_profile == DelayProfile::MILD) {
    dm.lo[2] = 5.0;
    dm.hi[2] = 8.0;
  } else {
    dm.lo[2] = 50.0;
    dm.hi[2] = 80.0;
  }
  Rng cls = streams.derive("delay_class");
  dm.class_of = assign_delay_classes(cfg.N, cfg.gamma, cls);
  return dm;
}

double sample_runtime(int client_id, DelayModel& dm, Rng& stream) {
  if (dm.scripted) {
    const auto it = dm.script.find(client_id);
    if (it == dm.script.end()) {
      throw SimError("no scripted runtimes for client " + std::to_string(client_id));
    }
    size_t& pos = dm.script_pos[client_id];
    if (pos >= it->second.size()) {
      throw SimError("scripted runtime sequence exhausted for client " +
                     std::to_string(client_id));
    }
    return it->second[pos++];
  }
  const size_t ci = static_cast<size_t>(dm.class_of.at(client_id));
  return uniform_range(stream, dm.lo[ci], dm.hi[ci]);
}

ProblemInstance build_problem(const SimConfig& cfg) {
  validate_config(cfg);
  ProblemInstance prob;
  prob.spec.kind = cfg.model.kind;
  prob.spec.hidden = cfg.model.hidden;
  prob.spec.l2 = cfg.model.l2;

  if (cfg.dataset.kind == DatasetKind::QUADRATIC) {
    prob.classification = false;
    prob.quad = gen_quadratic_problem(derive_seed(cfg.master_seed, "dataset", 0),
                                      cfg.N, cfg.dataset.d, cfg.dataset.heterogeneity);
    prob.spec.d_in = cfg.dataset.d;
  } else {
    prob.classification = true;
    if (cfg.dataset.kind == DatasetKind::BLOBS) {
      prob.train = gen_blobs(derive_seed(cfg.master_seed, "dataset", 0),
                             cfg.dataset.n, cfg.dataset.d_in, cfg.dataset.C,
                             cfg.dataset.class_separation);
      if (cfg.dataset.n_test > 0) {
        prob.test = gen_blobs(derive_seed(cfg.master_seed, "dataset", 1),
                              cfg.dataset.n_test, cfg.dataset.d_in, cfg.dataset.C,
                              cfg.dataset.class_separation);
        prob.has_test = true;
      }
    } else {
      prob.train = load_csv_dataset(cfg.dataset.path);
      if (!cfg.dataset.test_path.empty()) {
        prob.test = load_csv_dataset(cfg.dataset.test_path);
        prob.has_test = true;
      }
    }
    prob.spec.d_in = prob.train.features.cols;
    prob.spec.C = std::max(prob.train.C, prob.has_test ? prob.test.C : 0);
    if (prob.train.n < cfg.N) {
      throw ConfigError("dataset has fewer samples than clients");
    }
    RngStreams streams(cfg.master_seed);
    Rng pstream = streams.derive("partition");
    prob.part = dirichlet_partition(prob.train.labels, cfg.N, cfg.alpha, pstream);
  }

  Rng init(derive_seed(cfg.master_seed, "model_init", 0));
  prob.x0 = init_params(prob.spec, init);
  return prob;
}

EvalResult global_eval(const ProblemInstance& prob, const ParamVector& x) {
  const kernels::Kernels& k = kernels::active();
  const int N = prob.classification ? static_cast<int>(prob.part.assignment.size())
                                    : static_cast<int>(prob.quad.A.size());
  static const std::vector<int> no_batch;
  double loss = 0.0;
  ParamVector g(x.size(), 0.0);
  for (int i = 0; i < N; ++i) {
    const ClientData cd = prob.client(i);
    const std::vector<int>& batch =
        prob.classification ? prob.part.assignment[i] : no_batch;
    const GradEval ge = loss_and_grad(prob.spec, x, batch, cd);
    loss += ge.loss;
    k.axpy(g.size(), 1.0, ge.grad.data(), g.data());
  }
  const double inv = 1.0 / static_cast<double>(N);
  EvalResult ev;
  ev.loss = loss * inv;
  k.scal(g.size(), inv, g.data());
  ev.grad_norm_sq = k.dot(g.size(), g.data(), g.data());
  ev.test_acc = (prob.classification && prob.has_test)
                    ? accuracy(prob.spec, x, prob.test)
                    : std::numeric_limits<double>::quiet_NaN();
  return ev;
}

DelayStats delay_stats(const RunTrace& trace) {
  if (trace.records.empty()) throw SimError("delay_stats: empty trace");
  DelayStats st;
  std::vector<int64_t> per_round;
  per_round.reserve(trace.records.size());
  double sum = 0.0;
  for (const FlushRecord& r : trace.records) {
    for (int64_t tau : r.tau_list) st.tau_max = std::max(st.tau_max, tau);
    per_round.push_back(r.tau_max_t);
    sum += static_cast<double>(r.tau_max_t);
  }
  st.tau_avg = sum / static_cast<double>(per_round.size());
  std::sort(per_round.begin(), per_round.end());
  st.tau_median = per_round[(per_round.size() - 1) / 2];  // lower median
  return st;
}

namespace {

// Partial Fisher-Yates: `count` distinct clients, uniform over subsets.
std::vector<int> sample_without_replacement(Rng& rng, int N, int count) {
  std::vector<int> pool(N);
  std::iota(pool.begin(), pool.end(), 0);
  for (int k = 0; k < count; ++k) {
    const uint64_t j =
        static_cast<uint64_t>(k) + uniform_int(rng, static_cast<uint64_t>(N - k));
    std::swap(pool[k], pool[j]);
  }
  pool.resize(count);
  return pool;
}

struct InFlightRec {
  int64_t dispatch_round = 0;
  ParamVector snapshot;
  uint64_t dispatch_index = 0;
};

FlushRecord make_record(const ProblemInstance& prob, const ParamVector& x,
                        int64_t round, double sim_time, double eta_t,
                        int64_t tau_max_t, std::vector<int64_t> tau_list) {
  const EvalResult ev = global_eval(prob, x);
  FlushRecord fr;
  fr.round = round;
  fr.sim_time = sim_time;
  fr.eta_t = eta_t;
  fr.tau_max_t = tau_max_t;
  fr.train_loss = ev.loss;
  fr.grad_norm_sq = ev.grad_norm_sq;
  fr.test_acc = ev.test_acc;
  fr.tau_list = std::move(tau_list);
  return fr;
}

}  // namespace

RunTrace run_async(const SimConfig& cfg, const EngineHooks* hooks) {
  validate_config(cfg);
  switch (cfg.algorithm) {
    case Algorithm::FADAS:
    case Algorithm::FADAS_DA:
    case Algorithm::FEDBUFF:
    case Algorithm::FEDASYNC:
      break;
    default:
      throw ConfigError("run_async: algorithm must be fadas, fadas_da, fedbuff, or fedasync");
  }
  if (cfg.exclude_last_completer && cfg.hyper.M_c >= cfg.N) {
    throw ConfigError("exclude_last_completer requires M_c < N");
  }

  const ProblemInstance prob = build_problem(cfg);
  const RngStreams streams(cfg.master_seed);
  DelayModel dm = (hooks && hooks->delay_model) ? *hooks->delay_model
                                                : build_delay_model(cfg, streams);

  const HyperParams& hp = cfg.hyper;
  const int N = static_cast<int>(cfg.N);
  const int Mc = static_cast<int>(hp.M_c);
  const int64_t M = hp.M;
  const int64_t T = hp.T;
  const kernels::Kernels& k = kernels::active();
  const LocalSgdParams lp{hp.eta_l, static_cast<int>(hp.K),
                          static_cast<int>(cfg.batch_size)};

  ParamVector x = prob.x0;
  ServerOptState state = init_server_state(prob.x0);

  Rng cs = streams.derive("client_sampling");
  std::map<int, InFlightRec> inflight;
  std::vector<uint64_t> next_dispatch(N, 0);
  using Ev = std::pair<double, int>;
  std::priority_queue<Ev, std::vector<Ev>, std::greater<Ev>> queue;

  int64_t t = 1;  // flush-round counter (per arrival for FEDASYNC)
  const auto dispatch = [&](int client, double now) {
    const uint64_t di = next_dispatch[client]++;
    inflight.emplace(client, InFlightRec{t, x, di});
    Rng rt = streams.derive("runtime", client, di);
    const double dur = sample_runtime(client, dm, rt);
    if (!std::isfinite(dur) || !(dur > 0.0)) {
      throw SimError("runtime must be positive and finite");
    }
    queue.emplace(now + dur, client);
    if (hooks && hooks->on_dispatch) hooks->on_dispatch(client, t);
  };

  std::vector<int> warm = cfg.scripted.warmup.empty()
                              ? sample_without_replacement(cs, N, Mc)
                              : cfg.scripted.warmup;
  for (int c : warm) dispatch(c, 0.0);

  RunTrace trace;
  trace.records.reserve(static_cast<size_t>(T));
  ParamVector acc(x.size(), 0.0);
  std::vector<int64_t> tau_list;
  int64_t flushes = 0;

  while (flushes < T) {
    if (static_cast<int>(inflight.size()) != Mc) {
      throw SimError("concurrency invariant violated");
    }
    if (queue.empty()) throw SimError("event queue exhausted before T rounds");
    const double now = queue.top().first;
    if (hooks && hooks->on_group) hooks->on_group(now);
    std::vector<int> group;
    while (!queue.empty() && queue.top().first == now) {
      group.push_back(queue.top().second);
      queue.pop();
    }
    std::sort(group.begin(), group.end());

    bool done = false;
    for (int client : group) {
      const auto it = inflight.find(client);
      InFlightRec rec = std::move(it->second);
      inflight.erase(it);
      Rng mb = streams.derive("minibatch", client, rec.dispatch_index);
      const ParamVector delta =
          local_sgd(prob.spec, rec.snapshot, prob.client(client), lp, mb);
      const int64_t tau = t - rec.dispatch_round;
      if (hooks && hooks->on_arrival) hooks->on_arrival(client, tau, t);

      if (cfg.algorithm == Algorithm::FEDASYNC) {
        ParamVector x_new = rec.snapshot;
        k.axpy(x_new.size(), 1.0, delta.data(), x_new.data());
        x = fedasync_step(x, x_new, cfg.fedasync.alpha_base, tau,
                          cfg.fedasync.staleness_exponent);
        const double alpha_t =
            fedasync_alpha(cfg.fedasync.alpha_base, tau, cfg.fedasync.staleness_exponent);
        trace.records.push_back(make_record(prob, x, t, now, alpha_t, tau, {tau}));
        if (hooks && hooks->on_flush) hooks->on_flush(trace.records.back(), x);
        ++t;
        ++flushes;
      } else {
        k.axpy(acc.size(), 1.0, delta.data(), acc.data());
        tau_list.push_back(tau);
        if (static_cast<int64_t>(tau_list.size()) == M) {
          ParamVector delta_avg = acc;
          k.scal(delta_avg.size(), 1.0 / static_cast<double>(M), delta_avg.data());
          const int64_t tau_max_t =
              *std::max_element(tau_list.begin(), tau_list.end());
          double eta_t;
          if (cfg.algorithm == Algorithm::FEDBUFF) {
            x = fedbuff_step(x, delta_avg, hp.eta);
            eta_t = hp.eta;
          } else {
            PseudoGradient pg;
            pg.delta = std::move(delta_avg);
            pg.tau_max_t = tau_max_t;
            StepResult res = fadas_step(state, pg, hp, cfg.eta_t_rule,
                                        cfg.algorithm == Algorithm::FADAS_DA);
            state = std::move(res.state);
            x = state.x;
            eta_t = res.eta_t;
          }
          trace.records.push_back(
              make_record(prob, x, t, now, eta_t, tau_max_t, std::move(tau_list)));
          if (hooks && hooks->on_flush) hooks->on_flush(trace.records.back(), x);
          tau_list = {};
          std::fill(acc.begin(), acc.end(), 0.0);
          ++t;
          ++flushes;
        }
      }
      if (flushes == T) {
        done = true;
        break;
      }
    }
    if (done) break;

    for (int client : group) {
      std::vector<int> candidates;
      candidates.reserve(N);
      for (int c = 0; c < N; ++c) {
        if (inflight.count(c)) continue;
        if (cfg.exclude_last_completer && c == client) continue;
        candidates.push_back(c);
      }
      if (candidates.empty()) throw SimError("no candidate for replacement dispatch");
      const int pick =
          candidates[uniform_int(cs, static_cast<uint64_t>(candidates.size()))];
      dispatch(pick, now);
    }
  }

  trace.stats = delay_stats(trace);
  trace.x_final = std::move(x);
  return trace;
}

RunTrace run_sync(const SimConfig& cfg, const EngineHooks* hooks) {
  validate_config(cfg);
  if (cfg.algorithm != Algorithm::FEDAVG && cfg.algorithm != Algorithm::FEDAMS) {
    throw ConfigError("run_sync: algorithm must be fedavg or fedams");
  }

  const ProblemInstance prob = build_problem(cfg);
  const RngStreams streams(cfg.master_seed);
  DelayModel dm = (hooks && hooks->delay_model) ? *hooks->delay_model
                                                : build_delay_model(cfg, streams);

  const HyperParams& hp = cfg.hyper;
  const int N = static_cast<int>(cfg.N);
  const int Mc = static_cast<int>(hp.M_c);
  const LocalSgdParams lp{hp.eta_l, static_cast<int>(hp.K),
                          static_cast<int>(cfg.batch_size)};

  ParamVector x = prob.x0;
  ServerOptState state = init_server_state(prob.x0);
  Rng cs = streams.derive("client_sampling");
  std::vector<uint64_t> next_dispatch(N, 0);

  RunTrace trace;
  trace.records.reserve(static_cast<size_t>(hp.T));
  double sim_time = 0.0;
  for (int64_t t = 1; t <= hp.T; ++t) {
    std::vector<int> part = sample_without_replacement(cs, N, Mc);
    std::sort(part.begin(), part.end());
    std::vector<ParamVector> deltas;
    deltas.reserve(part.size());
    double max_rt = 0.0;
    for (int client : part) {
      const uint64_t di = next_dispatch[client]++;
      Rng mb = streams.derive("minibatch", client, di);
      deltas.push_back(local_sgd(prob.spec, x, prob.client(client), lp, mb));
      Rng rt = streams.derive("runtime", client, di);
      max_rt = std::max(max_rt, sample_runtime(client, dm, rt));
    }
    double eta_t;
    if (cfg.algorithm == Algorithm::FEDAVG) {
      x = fedavg_aggregate(x, deltas);
      eta_t = 1.0;
    } else {
      state = fedams_sync_step(state, deltas, hp);
      x = state.x;
      eta_t = hp.eta;
    }
    sim_time += max_rt;
    trace.records.push_back(make_record(prob, x, t, sim_time, eta_t, 0,
                                        std::vector<int64_t>(part.size(), 0)));
    if (hooks && hooks->on_flush) hooks->on_flush(trace.records.back(), x);
  }

  trace.stats = delay_stats(trace);
  trace.x_final = std::move(x);
  return trace;
}

RunTrace run_simulation(const SimConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::FEDAVG:
    case Algorithm::FEDAMS:
      return run_sync(cfg);
    default:
      return run_async(cfg);
  }
}

}  // namespace fadas
