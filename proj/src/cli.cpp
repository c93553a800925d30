// SPDX-License-Identifier: Apache-2.0
#include "fadas/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <thread>

#include "fadas/config_json.hpp"
#include "fadas/sim.hpp"
#include "fadas/trace_io.hpp"
#include "json.hpp"

namespace fadas {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

void check_finite(const RunTrace& trace) {
  for (const FlushRecord& r : trace.records) {
    if (!std::isfinite(r.train_loss) || !std::isfinite(r.grad_norm_sq)) {
      throw SimError("non-finite loss at round " + std::to_string(r.round));
    }
  }
}

// Mean of a metric over the last `window` recorded rounds.
double tail_mean(const RunTrace& trace, double FlushRecord::*field, size_t window) {
  const size_t n = trace.records.size();
  const size_t w = std::min(window, n);
  double sum = 0.0;
  for (size_t i = n - w; i < n; ++i) sum += trace.records[i].*field;
  return sum / static_cast<double>(w);
}

int sweep_workers(size_t n_seeds) {
  int workers = 0;
  if (const char* env = std::getenv("FADAS_SIM_THREADS")) {
    workers = std::atoi(env);
  }
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  return static_cast<int>(std::min<size_t>(workers, n_seeds));
}

ordered_json json_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

MeanStd mean_and_sample_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.stdev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides) {
  SimConfig cfg;
  RunTrace trace;
  try {
    cfg = load_config_file(config_path);
    for (const std::string& o : overrides) cfg = apply_override(cfg, o);
    load_scripted_runtimes(cfg);
    validate_config(cfg);
    trace = run_simulation(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  try {
    check_finite(trace);
    fs::create_directories(out_dir);
    const std::string csv = trace_to_csv(trace);
    const std::string summary = summary_json(cfg, trace);
    write_file_atomic(out_dir + "/trace.csv", csv);
    write_file_atomic(out_dir + "/summary.json", summary);
    const std::vector<ManifestEntry> outputs = {
        {"trace.csv", checksum_hex(csv)},
        {"summary.json", checksum_hex(summary)},
    };
    write_file_atomic(out_dir + "/manifest.json",
                      manifest_json(cfg, {cfg.master_seed}, outputs));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  std::cout << "wrote " << out_dir << "/trace.csv (" << trace.records.size()
            << " rounds)\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::uint64_t>& seeds,
              const std::string& out_dir) {
  if (seeds.empty()) {
    std::cerr << "error: sweep needs at least one seed\n";
    return 2;
  }
  SimConfig base;
  try {
    base = load_config_file(config_path);
    load_scripted_runtimes(base);
    validate_config(base);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }

  struct SeedResult {
    bool ok = false;
    std::string error;
    std::string csv;
    double train_loss = 0.0;
    double grad_norm_sq = 0.0;
    double test_acc = std::numeric_limits<double>::quiet_NaN();
  };
  std::vector<SeedResult> results(seeds.size());

  constexpr size_t kWindow = 5;
  std::atomic<size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      SeedResult& res = results[i];
      try {
        SimConfig cfg = base;
        cfg.master_seed = seeds[i];
        const RunTrace trace = run_simulation(cfg);
        check_finite(trace);
        res.csv = trace_to_csv(trace);
        res.train_loss = tail_mean(trace, &FlushRecord::train_loss, kWindow);
        res.grad_norm_sq = tail_mean(trace, &FlushRecord::grad_norm_sq, kWindow);
        res.test_acc = tail_mean(trace, &FlushRecord::test_acc, kWindow);
        res.ok = true;
      } catch (const std::exception& e) {
        res.error = e.what();
      }
    }
  };
  const int n_workers = sweep_workers(seeds.size());
  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
  for (std::thread& th : threads) th.join();

  try {
    fs::create_directories(out_dir);
    std::vector<ManifestEntry> outputs;
    ordered_json per_seed = ordered_json::object();
    ordered_json failures = ordered_json::object();
    std::vector<double> losses, grads, accs;
    for (size_t i = 0; i < seeds.size(); ++i) {
      const std::string key = std::to_string(seeds[i]);
      const SeedResult& res = results[i];
      if (!res.ok) {
        failures[key] = res.error;
        std::cerr << "seed " << key << " failed: " << res.error << '\n';
        continue;
      }
      const std::string name = "trace_" + key + ".csv";
      write_file_atomic(out_dir + "/" + name, res.csv);
      outputs.push_back({name, checksum_hex(res.csv)});
      ordered_json m;
      m["train_loss"] = res.train_loss;
      m["grad_norm_sq"] = res.grad_norm_sq;
      m["test_acc"] = json_or_null(res.test_acc);
      per_seed[key] = std::move(m);
      losses.push_back(res.train_loss);
      grads.push_back(res.grad_norm_sq);
      if (!std::isnan(res.test_acc)) accs.push_back(res.test_acc);
    }

    ordered_json agg;
    agg["config"] = ordered_json::parse(serialize_config(base));
    agg["seeds"] = seeds;
    agg["window"] = kWindow;
    agg["per_seed"] = std::move(per_seed);
    ordered_json metrics;
    const auto put = [&](const char* name, const std::vector<double>& xs) {
      if (xs.empty()) {
        metrics[name] = nullptr;
        return;
      }
      const MeanStd ms = mean_and_sample_std(xs);
      ordered_json mj;
      mj["mean"] = ms.mean;
      mj["std"] = ms.stdev;
      metrics[name] = std::move(mj);
    };
    put("train_loss", losses);
    put("grad_norm_sq", grads);
    put("test_acc", accs);
    agg["metrics"] = std::move(metrics);
    agg["failures"] = std::move(failures);
    const std::string agg_text = agg.dump(2) + "\n";
    write_file_atomic(out_dir + "/aggregate.json", agg_text);
    outputs.push_back({"aggregate.json", checksum_hex(agg_text)});
    write_file_atomic(out_dir + "/manifest.json",
                      manifest_json(base, seeds, outputs));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }

  size_t n_failed = 0;
  for (const SeedResult& res : results) n_failed += res.ok ? 0 : 1;
  if (n_failed > 0) {
    std::cerr << n_failed << " of " << seeds.size() << " seeds failed\n";
    return 3;
  }
  std::cout << "wrote " << seeds.size() << " traces to " << out_dir << '\n';
  return 0;
}

int cmd_compare(const std::string& trace_a, const std::string& trace_b) {
  try {
    const TraceTable a = read_trace_csv(trace_a);
    const TraceTable b = read_trace_csv(trace_b);
    const CompareReport rep = compare_traces(a, b);
    for (size_t c = 0; c < rep.columns.size(); ++c) {
      std::cout << rep.columns[c] << ' ' << format_double(rep.max_abs_diff[c])
                << '\n';
    }
    std::cout << "max " << format_double(rep.overall) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace fadas
