// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "fadas/config_json.hpp"
#include "fadas/optim.hpp"
#include "fadas/sim.hpp"

using namespace fadas;

namespace {

SimConfig quad_config(const std::string& algorithm) {
  SimConfig cfg = parse_config(
      std::string(R"({"N": 3, "algorithm": ")") + algorithm + R"(",
        "delay_profile": "scripted", "master_seed": 5,
        "hyper": {"eta_l": 0.01, "eta": 0.5, "K": 1, "M": 2, "M_c": 2,
                  "tau_c": 8, "T": 4},
        "dataset": {"kind": "quadratic", "d": 2, "heterogeneity": 1.0},
        "model": {"kind": "quadratic"},
        "exclude_last_completer": true})");
  cfg.scripted.runtimes = {{0, {1.0, 1.0, 1.0}},
                           {1, {2.5, 2.2, 2.2}},
                           {2, {1.75, 1.75, 1.75}}};
  cfg.scripted.warmup = {0, 1};
  return cfg;
}

// Naive full-batch gradient of F_i(x) = 0.5 ||A x - b||^2.
ParamVector quad_grad(const Matrix& A, const ParamVector& b,
                      const ParamVector& x) {
  const int d = A.cols;
  ParamVector r(d, 0.0), g(d, 0.0);
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += A.at(i, j) * x[j];
    r[i] = s - b[i];
  }
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) g[j] += A.at(i, j) * r[i];
  }
  return g;
}

FlushRecord fake_record(int64_t tau) {
  FlushRecord r;
  r.tau_max_t = tau;
  r.tau_list = {tau};
  return r;
}

}  // namespace

TEST_CASE("assign_delay_classes determinism and gamma extremes") {
  Rng s1(derive_seed(7, "delay_class", 0, 0));
  Rng s2(derive_seed(7, "delay_class", 0, 0));
  auto a = assign_delay_classes(50, 1.0, s1);
  auto b = assign_delay_classes(50, 1.0, s2);
  CHECK(a == b);
  CHECK(a.size() == 50);

  // Huge gamma: Dir(gamma 1_3) concentrates on (1/3, 1/3, 1/3).
  Rng s3(derive_seed(8, "delay_class", 0, 0));
  auto big = assign_delay_classes(3000, 1e6, s3);
  int counts[3] = {0, 0, 0};
  for (DelayClass c : big) counts[static_cast<int>(c)]++;
  for (int c : counts) {
    CHECK(c > 1000 - 150);
    CHECK(c < 1000 + 150);
  }

  // Tiny gamma: the draw lands near a vertex for most seeds, so some seed
  // has a single class covering > 70% of clients.
  bool found_dominant = false;
  for (int seed = 0; seed < 20; ++seed) {
    Rng s(derive_seed(100 + seed, "delay_class", 0, 0));
    auto cls = assign_delay_classes(100, 0.1, s);
    int h[3] = {0, 0, 0};
    for (DelayClass c : cls) h[static_cast<int>(c)]++;
    if (*std::max_element(h, h + 3) > 70) found_dominant = true;
  }
  CHECK(found_dominant);
}

TEST_CASE("sample_runtime ranges per profile") {
  SimConfig cfg = parse_config(
      R"({"N": 30, "algorithm": "fadas", "delay_profile": "mild",
          "master_seed": 11, "hyper": {"M_c": 10, "M": 2}})");
  RngStreams streams(cfg.master_seed);

  DelayModel mild = build_delay_model(cfg, streams);
  CHECK(mild.lo[0] == 1.0);
  CHECK(mild.hi[0] == 2.0);
  CHECK(mild.lo[1] == 3.0);
  CHECK(mild.hi[1] == 5.0);
  CHECK(mild.lo[2] == 5.0);
  CHECK(mild.hi[2] == 8.0);

  cfg.delay_profile = DelayProfile::LARGE_WORST_CASE;
  DelayModel worst = build_delay_model(cfg, streams);
  CHECK(worst.lo[2] == 50.0);
  CHECK(worst.hi[2] == 80.0);
  CHECK(worst.lo[0] == 1.0);

  for (int client = 0; client < 30; ++client) {
    Rng rt(derive_seed(cfg.master_seed, "runtime", client, 0));
    const int cls = static_cast<int>(worst.class_of[client]);
    for (int draw = 0; draw < 20; ++draw) {
      const double r = sample_runtime(client, worst, rt);
      CHECK(r >= worst.lo[cls]);
      CHECK(r < worst.hi[cls]);
    }
  }
}

TEST_CASE("scripted runtimes replay and exhaust") {
  DelayModel dm;
  dm.scripted = true;
  dm.script = {{0, {4.0, 7.5}}};
  Rng unused(1);
  CHECK(sample_runtime(0, dm, unused) == 4.0);
  CHECK(sample_runtime(0, dm, unused) == 7.5);
  CHECK_THROWS_WITH_AS(sample_runtime(0, dm, unused),
                       "scripted runtime sequence exhausted for client 0",
                       SimError);
  CHECK_THROWS_WITH_AS(sample_runtime(1, dm, unused),
                       "no scripted runtimes for client 1", SimError);
}

TEST_CASE("delay_stats on pinned examples") {
  RunTrace tr;
  for (int64_t v : {2, 2, 2}) tr.records.push_back(fake_record(v));
  DelayStats s = delay_stats(tr);
  CHECK(s.tau_max == 2);
  CHECK(s.tau_avg == 2.0);
  CHECK(s.tau_median == 2);

  tr.records.clear();
  for (int64_t v : {1, 2, 9, 100}) tr.records.push_back(fake_record(v));
  s = delay_stats(tr);
  CHECK(s.tau_max == 100);
  CHECK(s.tau_avg == 28.0);
  CHECK(s.tau_median == 2);  // lower median of an even count

  tr.records.clear();
  tr.records.push_back(fake_record(5));
  s = delay_stats(tr);
  CHECK(s.tau_max == 5);
  CHECK(s.tau_avg == 5.0);
  CHECK(s.tau_median == 5);

  // tau_max scans every tau, not just the per-round maxima.
  tr.records.clear();
  FlushRecord multi;
  multi.tau_max_t = 3;
  multi.tau_list = {0, 7, 3};
  tr.records.push_back(multi);
  CHECK(delay_stats(tr).tau_max == 7);

  RunTrace empty;
  CHECK_THROWS_AS(delay_stats(empty), SimError);
}

TEST_CASE("build_problem quadratic and blobs instances") {
  SimConfig qcfg = quad_config("fedbuff");
  ProblemInstance qp = build_problem(qcfg);
  CHECK_FALSE(qp.classification);
  CHECK_FALSE(qp.has_test);
  CHECK(qp.x0 == ParamVector{0.0, 0.0});
  CHECK(qp.quad.A.size() == 3);
  ProblemInstance qp2 = build_problem(qcfg);
  CHECK(qp.quad.A[1].data == qp2.quad.A[1].data);
  CHECK(qp.quad.b[2] == qp2.quad.b[2]);

  SimConfig bcfg = parse_config(
      R"({"N": 5, "algorithm": "fadas", "delay_profile": "mild",
          "master_seed": 3, "hyper": {"M_c": 5, "M": 2},
          "dataset": {"kind": "blobs", "n": 60, "n_test": 20, "d_in": 4,
                      "C": 3, "class_separation": 2.0},
          "model": {"kind": "logistic"}})");
  ProblemInstance bp = build_problem(bcfg);
  CHECK(bp.classification);
  CHECK(bp.has_test);
  CHECK(bp.train.n == 60);
  CHECK(bp.test.n == 20);
  CHECK(bp.spec.C == 3);
  CHECK(static_cast<int>(bp.x0.size()) == bp.spec.param_dim());
  std::vector<int> seen(60, 0);
  REQUIRE(bp.part.assignment.size() == 5);
  for (const auto& shard : bp.part.assignment) {
    CHECK(!shard.empty());
    for (int idx : shard) seen[idx]++;
  }
  for (int c : seen) CHECK(c == 1);
  // Train and test draws are independent streams but the same distribution.
  CHECK(bp.train.features.data != bp.test.features.data);

  SimConfig tiny = bcfg;
  tiny.dataset.n = 4;
  CHECK_THROWS_WITH_AS(build_problem(tiny),
                       "dataset has fewer samples than clients", ConfigError);
}

TEST_CASE("global_eval averages client objectives") {
  SimConfig cfg = quad_config("fedbuff");
  ProblemInstance prob = build_problem(cfg);

  Rng g(17);
  ParamVector x(2);
  for (auto& e : x) e = normal01(g);
  EvalResult ev = global_eval(prob, x);

  double loss = 0.0;
  ParamVector grad(2, 0.0);
  for (int i = 0; i < 3; ++i) {
    const Matrix& A = prob.quad.A[i];
    ParamVector r(2, 0.0);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) r[a] += A.at(a, b) * x[b];
      r[a] -= prob.quad.b[i][a];
    }
    loss += 0.5 * (r[0] * r[0] + r[1] * r[1]);
    ParamVector gi = quad_grad(A, prob.quad.b[i], x);
    for (int a = 0; a < 2; ++a) grad[a] += gi[a];
  }
  loss /= 3.0;
  for (auto& e : grad) e /= 3.0;
  CHECK(ev.loss == doctest::Approx(loss).epsilon(1e-12));
  CHECK(ev.grad_norm_sq ==
        doctest::Approx(grad[0] * grad[0] + grad[1] * grad[1]).epsilon(1e-10));
  CHECK(std::isnan(ev.test_acc));

  // At the global minimizer the gradient norm vanishes.
  ParamVector xstar = global_minimizer(prob.quad);
  CHECK(global_eval(prob, xstar).grad_norm_sq < 1e-18);

  EvalResult twice = global_eval(prob, x);
  CHECK(twice.loss == ev.loss);
  CHECK(twice.grad_norm_sq == ev.grad_norm_sq);
}

TEST_CASE("buffered async engine matches the hand-derived schedule") {
  SimConfig cfg = quad_config("fedbuff");
  ProblemInstance prob = build_problem(cfg);

  std::vector<std::tuple<int, int64_t, int64_t>> arrivals;
  std::vector<ParamVector> models;
  EngineHooks hooks;
  hooks.on_arrival = [&](int c, int64_t tau, int64_t round) {
    arrivals.emplace_back(c, tau, round);
  };
  hooks.on_flush = [&](const FlushRecord&, const ParamVector& x) {
    models.push_back(x);
  };

  RunTrace tr = run_async(cfg, &hooks);
  REQUIRE(tr.records.size() == 4);

  const double times[4] = {2.5, 3.5, 5.25, 7.45};
  const int64_t taumax[4] = {0, 1, 1, 1};
  const std::vector<std::vector<int64_t>> taus = {
      {0, 0}, {1, 0}, {1, 0}, {1, 0}};
  for (int r = 0; r < 4; ++r) {
    CHECK(tr.records[r].round == r + 1);
    CHECK(tr.records[r].sim_time == times[r]);
    CHECK(tr.records[r].tau_max_t == taumax[r]);
    CHECK(tr.records[r].tau_list == taus[r]);
    CHECK(tr.records[r].eta_t == 0.5);  // fedbuff records eta
  }

  CHECK(tr.stats.tau_max == 1);
  CHECK(tr.stats.tau_avg == 0.75);
  CHECK(tr.stats.tau_median == 1);

  const std::vector<std::tuple<int, int64_t, int64_t>> expected = {
      {0, 0, 1}, {1, 0, 1}, {2, 1, 2}, {0, 0, 2},
      {1, 1, 3}, {2, 0, 3}, {0, 1, 4}, {1, 0, 4}};
  CHECK(arrivals == expected);

  // Round 1 model: x1 = x0 + eta * mean(delta_c0(x0), delta_c1(x0)) with
  // delta_i = -eta_l grad F_i (K = 1, deterministic quadratic objective).
  ParamVector x0 = prob.x0;
  ParamVector g0 = quad_grad(prob.quad.A[0], prob.quad.b[0], x0);
  ParamVector g1 = quad_grad(prob.quad.A[1], prob.quad.b[1], x0);
  REQUIRE(models.size() == 4);
  for (int a = 0; a < 2; ++a) {
    const double mean = 0.5 * (-0.01 * g0[a] + -0.01 * g1[a]);
    CHECK(models[0][a] == doctest::Approx(x0[a] + 0.5 * mean).epsilon(1e-12));
  }

  // Round 2 mixes a stale delta (c2 dispatched before flush 1, snapshot x0)
  // with a fresh one (c0 dispatched after flush 1, snapshot x1).
  ParamVector g2_stale = quad_grad(prob.quad.A[2], prob.quad.b[2], x0);
  ParamVector g0_fresh = quad_grad(prob.quad.A[0], prob.quad.b[0], models[0]);
  for (int a = 0; a < 2; ++a) {
    const double mean = 0.5 * (-0.01 * g2_stale[a] + -0.01 * g0_fresh[a]);
    CHECK(models[1][a] ==
          doctest::Approx(models[0][a] + 0.5 * mean).epsilon(1e-12));
  }

  // Identical rerun, identical trace.
  RunTrace tr2 = run_async(cfg, nullptr);
  CHECK(tr2.x_final == tr.x_final);
  for (int r = 0; r < 4; ++r) {
    CHECK(tr2.records[r].train_loss == tr.records[r].train_loss);
    CHECK(tr2.records[r].grad_norm_sq == tr.records[r].grad_norm_sq);
  }
}

TEST_CASE("fedasync flushes per arrival with staleness-weighted mixing") {
  // Two slots: client 0 cycles fast (1.0 each) while client 1 computes for
  // 2.5, spanning the two flushes client 0 triggers. Single idle candidate
  // per replacement keeps the dispatch schedule deterministic.
  SimConfig cfg = parse_config(
      R"({"N": 2, "algorithm": "fedasync", "delay_profile": "scripted",
          "master_seed": 9,
          "hyper": {"eta_l": 0.01, "K": 1, "M": 1, "M_c": 2, "T": 3},
          "dataset": {"kind": "quadratic", "d": 2, "heterogeneity": 1.0},
          "model": {"kind": "quadratic"},
          "fedasync": {"alpha_base": 0.6, "staleness_exponent": 0.5}})");
  cfg.scripted.runtimes = {{0, {1.0, 1.0, 1.0}}, {1, {2.5}}};
  cfg.scripted.warmup = {0, 1};

  ProblemInstance prob = build_problem(cfg);
  std::vector<ParamVector> models;
  EngineHooks hooks;
  hooks.on_flush = [&](const FlushRecord&, const ParamVector& x) {
    models.push_back(x);
  };
  RunTrace tr = run_async(cfg, &hooks);
  REQUIRE(tr.records.size() == 3);

  CHECK(tr.records[0].sim_time == 1.0);
  CHECK(tr.records[1].sim_time == 2.0);
  CHECK(tr.records[2].sim_time == 2.5);
  CHECK(tr.records[0].tau_max_t == 0);
  CHECK(tr.records[1].tau_max_t == 0);
  CHECK(tr.records[2].tau_max_t == 2);  // dispatched at round 1, lands at 3
  CHECK(tr.records[0].tau_list == std::vector<int64_t>{0});
  CHECK(tr.records[2].tau_list == std::vector<int64_t>{2});

  const double a0 = 0.6;
  const double a2 = 0.6 * std::pow(3.0, -0.5);
  CHECK(tr.records[0].eta_t == a0);
  CHECK(tr.records[1].eta_t == a0);
  CHECK(tr.records[2].eta_t == doctest::Approx(a2).epsilon(1e-15));

  // x1 = (1 - a0) x0 + a0 (x0 + delta) = x0 + a0 * delta elementwise.
  ParamVector g0 = quad_grad(prob.quad.A[0], prob.quad.b[0], prob.x0);
  for (int a = 0; a < 2; ++a) {
    CHECK(models[0][a] ==
          doctest::Approx(prob.x0[a] + a0 * (-0.01 * g0[a])).epsilon(1e-12));
  }

  // Round 3 mixes toward client 1's update of the ROUND-1 snapshot x0.
  ParamVector g1 = quad_grad(prob.quad.A[1], prob.quad.b[1], prob.x0);
  for (int a = 0; a < 2; ++a) {
    const double x_new = prob.x0[a] - 0.01 * g1[a];
    CHECK(models[2][a] ==
          doctest::Approx((1.0 - a2) * models[1][a] + a2 * x_new)
              .epsilon(1e-12));
  }

  CHECK(tr.stats.tau_max == 2);
  CHECK(tr.stats.tau_avg == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(tr.stats.tau_median == 0);  // lower median of {0, 0, 2}
}

TEST_CASE("simultaneous completions are processed in ascending client order") {
  SimConfig cfg = parse_config(
      R"({"N": 3, "algorithm": "fedbuff", "delay_profile": "scripted",
          "master_seed": 2,
          "hyper": {"eta_l": 0.01, "eta": 1.0, "K": 1, "M": 2, "M_c": 2,
                    "T": 1},
          "dataset": {"kind": "quadratic", "d": 2, "heterogeneity": 0.5},
          "model": {"kind": "quadratic"}})");
  // Client 1 is dispatched first but client 0 must arrive first in the tie.
  cfg.scripted.runtimes = {{0, {2.0}}, {1, {2.0}}};
  cfg.scripted.warmup = {1, 0};

  std::vector<int> order;
  EngineHooks hooks;
  hooks.on_arrival = [&](int c, int64_t, int64_t) { order.push_back(c); };
  RunTrace tr = run_async(cfg, &hooks);
  CHECK(order == std::vector<int>{0, 1});
  REQUIRE(tr.records.size() == 1);
  CHECK(tr.records[0].sim_time == 2.0);
  CHECK(tr.records[0].tau_list == std::vector<int64_t>{0, 0});
  // T reached inside the tie group: no replacement dispatch may happen
  // (client 2 has no scripted runtimes, so a stray dispatch would throw).
}

TEST_CASE("single-slot concurrency never sees staleness") {
  SimConfig cfg = parse_config(
      R"({"N": 3, "algorithm": "fadas", "delay_profile": "mild",
          "master_seed": 21,
          "hyper": {"eta_l": 0.05, "eta": 0.01, "K": 2, "M": 1, "M_c": 1,
                    "T": 10},
          "dataset": {"kind": "blobs", "n": 30, "n_test": 0, "d_in": 3,
                      "C": 2, "class_separation": 2.0},
          "model": {"kind": "logistic"}})");
  RunTrace tr = run_async(cfg, nullptr);
  REQUIRE(tr.records.size() == 10);
  for (const auto& r : tr.records) {
    CHECK(r.tau_max_t == 0);
    CHECK(r.tau_list == std::vector<int64_t>{0});
    CHECK(std::isnan(r.test_acc));  // n_test = 0: no test set
  }
  CHECK(tr.stats.tau_max == 0);
  CHECK(tr.stats.tau_avg == 0.0);
}

TEST_CASE("synchronous rounds advance by the slowest participant") {
  SimConfig cfg = parse_config(
      R"({"N": 3, "algorithm": "fedavg", "delay_profile": "scripted",
          "master_seed": 13,
          "hyper": {"eta_l": 0.02, "eta": 0.3, "K": 1, "M": 1, "M_c": 3,
                    "T": 3},
          "dataset": {"kind": "quadratic", "d": 2, "heterogeneity": 1.0},
          "model": {"kind": "quadratic"}})");
  cfg.scripted.runtimes = {
      {0, {5.0, 1.0, 7.0}}, {1, {3.0, 1.0, 2.0}}, {2, {4.0, 0.5, 6.5}}};

  ProblemInstance prob = build_problem(cfg);
  std::vector<ParamVector> models;
  EngineHooks hooks;
  hooks.on_flush = [&](const FlushRecord&, const ParamVector& x) {
    models.push_back(x);
  };
  RunTrace tr = run_sync(cfg, &hooks);
  REQUIRE(tr.records.size() == 3);
  CHECK(tr.records[0].sim_time == 5.0);
  CHECK(tr.records[1].sim_time == 6.0);
  CHECK(tr.records[2].sim_time == 13.0);
  for (const auto& r : tr.records) {
    CHECK(r.eta_t == 1.0);  // fedavg applies the mean delta directly
    CHECK(r.tau_max_t == 0);
    CHECK(r.tau_list == std::vector<int64_t>(3, 0));
  }

  // Round 1: x1 = x0 + mean_i(-eta_l grad F_i(x0)) over all three clients.
  for (int a = 0; a < 2; ++a) {
    double mean = 0.0;
    for (int i = 0; i < 3; ++i) {
      mean += -0.02 * quad_grad(prob.quad.A[i], prob.quad.b[i], prob.x0)[a];
    }
    mean /= 3.0;
    CHECK(models[0][a] == doctest::Approx(prob.x0[a] + mean).epsilon(1e-12));
  }

  SimConfig ams = cfg;
  ams.algorithm = Algorithm::FEDAMS;
  RunTrace tr2 = run_sync(ams, nullptr);
  for (const auto& r : tr2.records) CHECK(r.eta_t == 0.3);
}

TEST_CASE("degenerate equivalence: full participation, constant runtimes") {
  // With M = M_c = N and constant scripted runtimes, the async engine loses
  // all asynchrony: every round buffers exactly one fresh delta per client.
  const char* base = R"({"N": 2, "algorithm": "fadas",
      "delay_profile": "scripted", "master_seed": 31,
      "hyper": {"eta_l": 0.05, "eta": 0.02, "beta1": 0.9, "beta2": 0.99,
                "eps": 1e-8, "K": 1, "M": 2, "M_c": 2, "tau_c": 8, "T": 10},
      "dataset": {"kind": "quadratic", "d": 3, "heterogeneity": 1.0},
      "model": {"kind": "quadratic"}})";
  SimConfig async_cfg = parse_config(base);
  async_cfg.scripted.runtimes = {{0, std::vector<double>(12, 1.0)},
                                 {1, std::vector<double>(12, 1.0)}};

  SimConfig sync_cfg = async_cfg;
  sync_cfg.algorithm = Algorithm::FEDAMS;

  std::vector<ParamVector> ax, sx;
  EngineHooks ah, sh;
  ah.on_flush = [&](const FlushRecord&, const ParamVector& x) {
    ax.push_back(x);
  };
  sh.on_flush = [&](const FlushRecord&, const ParamVector& x) {
    sx.push_back(x);
  };
  RunTrace at = run_async(async_cfg, &ah);
  RunTrace st = run_sync(sync_cfg, &sh);
  REQUIRE(ax.size() == 10);
  REQUIRE(sx.size() == 10);
  for (int r = 0; r < 10; ++r) {
    for (int a = 0; a < 3; ++a) {
      CHECK(std::abs(ax[r][a] - sx[r][a]) <= 1e-12);
    }
    CHECK(at.records[r].train_loss == st.records[r].train_loss);
    CHECK(at.records[r].tau_max_t == 0);
  }

  // fedbuff with eta = 1 degenerates to fedavg the same way.
  SimConfig buff = async_cfg;
  buff.algorithm = Algorithm::FEDBUFF;
  buff.hyper.eta = 1.0;
  SimConfig avg = sync_cfg;
  avg.algorithm = Algorithm::FEDAVG;
  RunTrace bt = run_async(buff, nullptr);
  RunTrace vt = run_sync(avg, nullptr);
  for (int r = 0; r < 10; ++r) {
    CHECK(std::abs(bt.records[r].train_loss - vt.records[r].train_loss) <=
          1e-15);
    CHECK(std::abs(bt.records[r].grad_norm_sq - vt.records[r].grad_norm_sq) <=
          1e-15);
  }
}

TEST_CASE("run_simulation dispatches on the algorithm") {
  SimConfig cfg = quad_config("fedbuff");
  RunTrace via_dispatch = run_simulation(cfg);
  RunTrace direct = run_async(cfg, nullptr);
  CHECK(via_dispatch.x_final == direct.x_final);

  SimConfig bad_async = quad_config("fedbuff");
  bad_async.algorithm = Algorithm::FEDAVG;
  CHECK_THROWS_AS(run_async(bad_async, nullptr), ConfigError);
  SimConfig bad_sync = quad_config("fedbuff");
  CHECK_THROWS_AS(run_sync(bad_sync, nullptr), ConfigError);

  SimConfig bad_exclude = quad_config("fadas");
  bad_exclude.hyper.M_c = 3;
  bad_exclude.hyper.M = 2;
  bad_exclude.scripted.warmup = {0, 1, 2};
  CHECK_THROWS_WITH_AS(run_async(bad_exclude, nullptr),
                       "exclude_last_completer requires M_c < N", ConfigError);
}

TEST_CASE("scripted runtime exhaustion surfaces as SimError") {
  SimConfig cfg = parse_config(
      R"({"N": 1, "algorithm": "fedbuff", "delay_profile": "scripted",
          "master_seed": 1,
          "hyper": {"eta_l": 0.01, "eta": 1.0, "K": 1, "M": 1, "M_c": 1,
                    "T": 2},
          "dataset": {"kind": "quadratic", "d": 2, "heterogeneity": 0.0},
          "model": {"kind": "quadratic"}})");
  cfg.scripted.runtimes = {{0, {1.0}}};
  CHECK_THROWS_WITH_AS(run_async(cfg, nullptr),
                       "scripted runtime sequence exhausted for client 0",
                       SimError);
}
