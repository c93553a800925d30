// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fadas {

// Flat parameter / pseudo-gradient vector. All math is 64-bit.
using ParamVector = std::vector<double>;

bool all_finite(const ParamVector& v);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runtime failure inside a simulation (non-finite loss, exhausted script).
struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c) {}

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const {
    return data[static_cast<size_t>(r) * cols + c];
  }
  double* row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
  const double* row(int r) const {
    return data.data() + static_cast<size_t>(r) * cols;
  }
};

enum class Algorithm { FADAS, FADAS_DA, FEDBUFF, FEDASYNC, FEDAVG, FEDAMS };
enum class DelayProfile { MILD, LARGE_WORST_CASE, SCRIPTED };
enum class EtaRule { MAIN_TEXT, APPENDIX };
enum class ModelKind { QUADRATIC, LOGISTIC, MLP };
enum class DatasetKind { BLOBS, QUADRATIC, CSV };

const char* to_string(Algorithm a);
const char* to_string(DelayProfile p);
const char* to_string(EtaRule r);
const char* to_string(ModelKind k);
const char* to_string(DatasetKind k);

struct HyperParams {
  double eta_l = 0.01;   // local learning rate
  double eta = 0.001;    // global learning rate
  double beta1 = 0.9;
  double beta2 = 0.99;
  double eps = 1e-8;
  std::int64_t K = 2;    // local SGD steps per dispatch
  std::int64_t M = 10;   // buffer size
  std::int64_t M_c = 20; // concurrency
  std::int64_t tau_c = 8;
  std::int64_t T = 100;  // total global rounds (flushes)
};

struct DatasetSpec {
  DatasetKind kind = DatasetKind::BLOBS;
  // blobs
  std::int64_t n = 200;
  std::int64_t n_test = 0;
  std::int64_t d_in = 5;
  std::int64_t C = 2;
  double class_separation = 4.0;
  // quadratic
  std::int64_t d = 10;
  double heterogeneity = 0.0;
  // csv
  std::string path;
  std::string test_path;
};

struct ModelConfig {
  ModelKind kind = ModelKind::LOGISTIC;
  std::int64_t hidden = 8;  // MLP only
  double l2 = 0.0;
};

struct FedAsyncParams {
  double alpha_base = 0.6;
  double staleness_exponent = 0.5;  // s(tau) = (tau + 1)^(-a)
};

// Oracle-test runtime scripting. `runtimes[c][k]` is client c's duration for
// its k-th dispatch; running past the script is an error. `warmup`, when
// nonempty, pins the initial M_c active clients.
struct ScriptedRuntimes {
  std::map<int, std::vector<double>> runtimes;
  std::vector<int> warmup;
  std::string runtimes_path;  // alternative to inline runtimes

  bool empty() const { return runtimes.empty() && runtimes_path.empty(); }
};

struct SimConfig {
  std::int64_t schema_version = 1;
  std::int64_t N = 100;
  Algorithm algorithm = Algorithm::FADAS;
  DelayProfile delay_profile = DelayProfile::MILD;
  double gamma = 1.0;  // Dirichlet concentration for delay-class assignment
  double alpha = 0.3;  // Dirichlet concentration for the data partition
  std::uint64_t master_seed = 1;
  EtaRule eta_t_rule = EtaRule::APPENDIX;
  HyperParams hyper;
  DatasetSpec dataset;
  ModelConfig model;
  std::int64_t batch_size = 0;  // 0 = full shard per step
  FedAsyncParams fedasync;
  bool exclude_last_completer = false;
  ScriptedRuntimes scripted;
};

// Returns cfg untouched iff every invariant holds; otherwise throws
// ConfigError naming the first violated one.
const SimConfig& validate_config(const SimConfig& cfg);

}  // namespace fadas
