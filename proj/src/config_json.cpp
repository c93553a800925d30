// SPDX-License-Identifier: Apache-2.0
#include "fadas/config_json.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fadas {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

template <typename T>
T parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, T>> table,
             const char* field) {
  for (const auto& [name, value] : table) {
    if (s == name) return value;
  }
  fail(std::string("invalid value for ") + field + ": " + s);
}

Algorithm parse_algorithm(const std::string& s) {
  return parse_enum<Algorithm>(s,
                               {{"fadas", Algorithm::FADAS},
                                {"fadas_da", Algorithm::FADAS_DA},
                                {"fedbuff", Algorithm::FEDBUFF},
                                {"fedasync", Algorithm::FEDASYNC},
                                {"fedavg", Algorithm::FEDAVG},
                                {"fedams", Algorithm::FEDAMS}},
                               "algorithm");
}

DelayProfile parse_profile(const std::string& s) {
  return parse_enum<DelayProfile>(s,
                                  {{"mild", DelayProfile::MILD},
                                   {"large_worst_case", DelayProfile::LARGE_WORST_CASE},
                                   {"scripted", DelayProfile::SCRIPTED}},
                                  "delay_profile");
}

EtaRule parse_rule(const std::string& s) {
  return parse_enum<EtaRule>(
      s, {{"main_text", EtaRule::MAIN_TEXT}, {"appendix", EtaRule::APPENDIX}},
      "eta_t_rule");
}

ModelKind parse_model_kind(const std::string& s) {
  return parse_enum<ModelKind>(s,
                               {{"quadratic", ModelKind::QUADRATIC},
                                {"logistic", ModelKind::LOGISTIC},
                                {"mlp", ModelKind::MLP}},
                               "model.kind");
}

DatasetKind parse_dataset_kind(const std::string& s) {
  return parse_enum<DatasetKind>(s,
                                 {{"blobs", DatasetKind::BLOBS},
                                  {"quadratic", DatasetKind::QUADRATIC},
                                  {"csv", DatasetKind::CSV}},
                                 "dataset.kind");
}

// Strict field reader: tracks which keys were consumed so leftovers can be
// reported as unknown.
class FieldReader {
 public:
  FieldReader(const ordered_json& obj, std::string scope)
      : obj_(obj), scope_(std::move(scope)) {
    if (!obj.is_object()) fail(scope_ + ": expected a JSON object");
  }

  bool has(const char* key) const { return obj_.contains(key); }

  template <typename T>
  void get(const char* key, T& out) {
    if (!obj_.contains(key)) return;
    consumed_.push_back(key);
    try {
      out = obj_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      fail(scope_ + "." + key + ": wrong type");
    }
  }

  template <typename T>
  void require(const char* key, T& out) {
    if (!obj_.contains(key)) fail(scope_ + "." + key + ": missing");
    get(key, out);
  }

  const ordered_json* sub(const char* key) {
    if (!obj_.contains(key)) return nullptr;
    consumed_.push_back(key);
    return &obj_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      (void)value;
      bool known = false;
      for (const auto& c : consumed_) known = known || (c == key);
      if (!known) fail(scope_ + ": unknown key \"" + key + "\"");
    }
  }

 private:
  const ordered_json& obj_;
  std::string scope_;
  std::vector<std::string> consumed_;
};

SimConfig from_json(const ordered_json& j) {
  SimConfig cfg;
  FieldReader top(j, "config");
  top.get("schema_version", cfg.schema_version);
  top.require("N", cfg.N);
  std::string s;
  top.require("algorithm", s);
  cfg.algorithm = parse_algorithm(s);
  top.require("delay_profile", s);
  cfg.delay_profile = parse_profile(s);
  top.get("gamma", cfg.gamma);
  top.get("alpha", cfg.alpha);
  top.require("master_seed", cfg.master_seed);
  if (top.has("eta_t_rule")) {
    top.get("eta_t_rule", s);
    cfg.eta_t_rule = parse_rule(s);
  }
  top.get("batch_size", cfg.batch_size);
  top.get("exclude_last_completer", cfg.exclude_last_completer);

  if (const ordered_json* hj = top.sub("hyper")) {
    FieldReader h(*hj, "hyper");
    h.get("eta_l", cfg.hyper.eta_l);
    h.get("eta", cfg.hyper.eta);
    h.get("beta1", cfg.hyper.beta1);
    h.get("beta2", cfg.hyper.beta2);
    h.get("eps", cfg.hyper.eps);
    h.get("K", cfg.hyper.K);
    h.get("M", cfg.hyper.M);
    h.get("M_c", cfg.hyper.M_c);
    h.get("tau_c", cfg.hyper.tau_c);
    h.get("T", cfg.hyper.T);
    h.finish();
  }

  if (const ordered_json* dj = top.sub("dataset")) {
    FieldReader d(*dj, "dataset");
    d.require("kind", s);
    cfg.dataset.kind = parse_dataset_kind(s);
    d.get("n", cfg.dataset.n);
    d.get("n_test", cfg.dataset.n_test);
    d.get("d_in", cfg.dataset.d_in);
    d.get("C", cfg.dataset.C);
    d.get("class_separation", cfg.dataset.class_separation);
    d.get("d", cfg.dataset.d);
    d.get("heterogeneity", cfg.dataset.heterogeneity);
    d.get("path", cfg.dataset.path);
    d.get("test_path", cfg.dataset.test_path);
    d.finish();
  }

  if (const ordered_json* mj = top.sub("model")) {
    FieldReader m(*mj, "model");
    m.require("kind", s);
    cfg.model.kind = parse_model_kind(s);
    m.get("hidden", cfg.model.hidden);
    m.get("l2", cfg.model.l2);
    m.finish();
  }

  if (const ordered_json* fj = top.sub("fedasync")) {
    FieldReader f(*fj, "fedasync");
    f.get("alpha_base", cfg.fedasync.alpha_base);
    f.get("staleness_exponent", cfg.fedasync.staleness_exponent);
    f.finish();
  }

  if (const ordered_json* sj = top.sub("scripted")) {
    FieldReader sc(*sj, "scripted");
    if (const ordered_json* rt = sc.sub("runtimes")) {
      if (!rt->is_object()) fail("scripted.runtimes: expected an object");
      for (const auto& [key, value] : rt->items()) {
        int client;
        try {
          client = std::stoi(key);
        } catch (...) {
          fail("scripted.runtimes: non-integer client id \"" + key + "\"");
        }
        try {
          cfg.scripted.runtimes[client] = value.get<std::vector<double>>();
        } catch (const nlohmann::json::exception&) {
          fail("scripted.runtimes." + key + ": expected an array of numbers");
        }
      }
    }
    sc.get("warmup", cfg.scripted.warmup);
    sc.get("runtimes_path", cfg.scripted.runtimes_path);
    sc.finish();
  }

  top.finish();
  return cfg;
}

ordered_json to_json(const SimConfig& cfg) {
  ordered_json j;
  j["schema_version"] = cfg.schema_version;
  j["N"] = cfg.N;
  j["algorithm"] = to_string(cfg.algorithm);
  j["delay_profile"] = to_string(cfg.delay_profile);
  j["gamma"] = cfg.gamma;
  j["alpha"] = cfg.alpha;
  j["master_seed"] = cfg.master_seed;
  j["eta_t_rule"] = to_string(cfg.eta_t_rule);
  j["batch_size"] = cfg.batch_size;
  j["exclude_last_completer"] = cfg.exclude_last_completer;
  ordered_json h;
  h["eta_l"] = cfg.hyper.eta_l;
  h["eta"] = cfg.hyper.eta;
  h["beta1"] = cfg.hyper.beta1;
  h["beta2"] = cfg.hyper.beta2;
  h["eps"] = cfg.hyper.eps;
  h["K"] = cfg.hyper.K;
  h["M"] = cfg.hyper.M;
  h["M_c"] = cfg.hyper.M_c;
  h["tau_c"] = cfg.hyper.tau_c;
  h["T"] = cfg.hyper.T;
  j["hyper"] = std::move(h);
  ordered_json d;
  d["kind"] = to_string(cfg.dataset.kind);
  switch (cfg.dataset.kind) {
    case DatasetKind::BLOBS:
      d["n"] = cfg.dataset.n;
      d["n_test"] = cfg.dataset.n_test;
      d["d_in"] = cfg.dataset.d_in;
      d["C"] = cfg.dataset.C;
      d["class_separation"] = cfg.dataset.class_separation;
      break;
    case DatasetKind::QUADRATIC:
      d["d"] = cfg.dataset.d;
      d["heterogeneity"] = cfg.dataset.heterogeneity;
      break;
    case DatasetKind::CSV:
      d["path"] = cfg.dataset.path;
      if (!cfg.dataset.test_path.empty()) d["test_path"] = cfg.dataset.test_path;
      break;
  }
  j["dataset"] = std::move(d);
  ordered_json m;
  m["kind"] = to_string(cfg.model.kind);
  if (cfg.model.kind == ModelKind::MLP) m["hidden"] = cfg.model.hidden;
  m["l2"] = cfg.model.l2;
  j["model"] = std::move(m);
  if (cfg.algorithm == Algorithm::FEDASYNC) {
    ordered_json f;
    f["alpha_base"] = cfg.fedasync.alpha_base;
    f["staleness_exponent"] = cfg.fedasync.staleness_exponent;
    j["fedasync"] = std::move(f);
  }
  if (!cfg.scripted.empty() || !cfg.scripted.warmup.empty()) {
    ordered_json sc;
    if (!cfg.scripted.runtimes.empty()) {
      ordered_json rt;
      for (const auto& [client, seq] : cfg.scripted.runtimes) {
        rt[std::to_string(client)] = seq;
      }
      sc["runtimes"] = std::move(rt);
    }
    if (!cfg.scripted.runtimes_path.empty()) {
      sc["runtimes_path"] = cfg.scripted.runtimes_path;
    }
    if (!cfg.scripted.warmup.empty()) sc["warmup"] = cfg.scripted.warmup;
    j["scripted"] = std::move(sc);
  }
  return j;
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimConfig& cfg) {
  return to_json(cfg).dump(2) + "\n";
}

SimConfig apply_override(const SimConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail("--set expects key.path=value, got: " + assignment);
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  ordered_json j = to_json(cfg);
  ordered_json* node = &j;
  size_t start = 0;
  for (;;) {
    const size_t dotpos = path.find('.', start);
    const std::string key = path.substr(start, dotpos - start);
    if (key.empty()) fail("--set: empty key segment in " + path);
    if (dotpos == std::string::npos) {
      ordered_json value;
      try {
        value = ordered_json::parse(raw);
      } catch (const nlohmann::json::exception&) {
        value = raw;  // unquoted strings (e.g. algorithm=fadas_da)
      }
      (*node)[key] = std::move(value);
      break;
    }
    if (!node->contains(key)) (*node)[key] = ordered_json::object();
    node = &(*node)[key];
    start = dotpos + 1;
  }
  return from_json(j);
}

void load_scripted_runtimes(SimConfig& cfg) {
  if (cfg.scripted.runtimes_path.empty()) return;
  std::ifstream in(cfg.scripted.runtimes_path);
  if (!in) fail("cannot open scripted runtimes file: " + cfg.scripted.runtimes_path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("scripted runtimes file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("scripted runtimes file: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    int client;
    try {
      client = std::stoi(key);
    } catch (...) {
      fail("scripted runtimes file: non-integer client id \"" + key + "\"");
    }
    try {
      cfg.scripted.runtimes[client] = value.get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      fail("scripted runtimes file: client " + key +
           ": expected an array of numbers");
    }
  }
}

}  // namespace fadas
