// SPDX-License-Identifier: Apache-2.0
#include "fadas/core.hpp"

#include <cmath>

namespace fadas {

bool all_finite(const ParamVector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::FADAS: return "fadas";
    case Algorithm::FADAS_DA: return "fadas_da";
    case Algorithm::FEDBUFF: return "fedbuff";
    case Algorithm::FEDASYNC: return "fedasync";
    case Algorithm::FEDAVG: return "fedavg";
    case Algorithm::FEDAMS: return "fedams";
  }
  return "?";
}

const char* to_string(DelayProfile p) {
  switch (p) {
    case DelayProfile::MILD: return "mild";
    case DelayProfile::LARGE_WORST_CASE: return "large_worst_case";
    case DelayProfile::SCRIPTED: return "scripted";
  }
  return "?";
}

const char* to_string(EtaRule r) {
  switch (r) {
    case EtaRule::MAIN_TEXT: return "main_text";
    case EtaRule::APPENDIX: return "appendix";
  }
  return "?";
}

const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::QUADRATIC: return "quadratic";
    case ModelKind::LOGISTIC: return "logistic";
    case ModelKind::MLP: return "mlp";
  }
  return "?";
}

const char* to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::BLOBS: return "blobs";
    case DatasetKind::QUADRATIC: return "quadratic";
    case DatasetKind::CSV: return "csv";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const char* what) { throw ConfigError(what); }

}  // namespace

const SimConfig& validate_config(const SimConfig& cfg) {
  if (cfg.schema_version != 1) fail("schema_version == 1 violated");
  if (cfg.N < 1) fail("N >= 1 violated");

  const HyperParams& h = cfg.hyper;
  if (!(h.eta_l > 0)) fail("eta_l > 0 violated");
  if (!(h.eta > 0)) fail("eta > 0 violated");
  if (!(h.beta1 >= 0)) fail("beta1 >= 0 violated");
  if (!(h.beta1 < 1)) fail("beta1 < 1 violated");
  if (!(h.beta2 >= 0)) fail("beta2 >= 0 violated");
  if (!(h.beta2 < 1)) fail("beta2 < 1 violated");
  if (!(h.eps > 0)) fail("eps > 0 violated");
  if (h.K < 1) fail("K >= 1 violated");
  if (h.M < 1) fail("M >= 1 violated");
  if (h.M > h.M_c) fail("M <= M_c violated");
  if (h.M_c > cfg.N) fail("M_c <= N violated");
  if (h.tau_c < 0) fail("tau_c >= 0 violated");
  if (h.T < 1) fail("T >= 1 violated");

  if (!(cfg.gamma > 0)) fail("gamma > 0 violated");
  if (!(cfg.alpha > 0)) fail("alpha > 0 violated");
  if (cfg.batch_size < 0) fail("batch_size >= 0 violated");

  const DatasetSpec& d = cfg.dataset;
  switch (d.kind) {
    case DatasetKind::BLOBS:
      if (d.d_in < 1) fail("dataset.d_in >= 1 violated");
      if (d.C < 2) fail("dataset.C >= 2 violated");
      if (d.n < d.C) fail("dataset.n >= dataset.C violated");
      if (d.n_test < 0) fail("dataset.n_test >= 0 violated");
      if (!(d.class_separation > 0)) {
        fail("dataset.class_separation > 0 violated");
      }
      break;
    case DatasetKind::QUADRATIC:
      if (d.d < 1) fail("dataset.d >= 1 violated");
      if (!(d.heterogeneity >= 0)) fail("dataset.heterogeneity >= 0 violated");
      break;
    case DatasetKind::CSV:
      if (d.path.empty()) fail("dataset.path nonempty violated");
      break;
  }

  const bool quad_data = d.kind == DatasetKind::QUADRATIC;
  const bool quad_model = cfg.model.kind == ModelKind::QUADRATIC;
  if (quad_data != quad_model) {
    fail("model.kind quadratic iff dataset.kind quadratic violated");
  }
  if (cfg.model.kind == ModelKind::MLP && cfg.model.hidden < 1) {
    fail("model.hidden >= 1 violated");
  }
  if (!(cfg.model.l2 >= 0)) fail("model.l2 >= 0 violated");

  if (cfg.algorithm == Algorithm::FEDASYNC) {
    const FedAsyncParams& fa = cfg.fedasync;
    if (!(fa.alpha_base > 0 && fa.alpha_base <= 1)) {
      fail("fedasync.alpha_base in (0,1] violated");
    }
    if (!(fa.staleness_exponent >= 0)) {
      fail("fedasync.staleness_exponent >= 0 violated");
    }
  }

  if (cfg.delay_profile == DelayProfile::SCRIPTED) {
    if (cfg.scripted.empty()) fail("scripted.runtimes nonempty violated");
  }
  if (!cfg.scripted.warmup.empty()) {
    if (static_cast<std::int64_t>(cfg.scripted.warmup.size()) != h.M_c) {
      fail("scripted.warmup size == M_c violated");
    }
    std::vector<bool> seen(static_cast<size_t>(cfg.N), false);
    for (int c : cfg.scripted.warmup) {
      if (c < 0 || c >= cfg.N) fail("scripted.warmup client in [0,N) violated");
      if (seen[static_cast<size_t>(c)]) {
        fail("scripted.warmup clients distinct violated");
      }
      seen[static_cast<size_t>(c)] = true;
    }
  }
  return cfg;
}

}  // namespace fadas
