// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fadas {

// Exit codes: 0 success, 2 invalid config, 3 runtime failure.
int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides);

// One trace per seed plus aggregate.json. FADAS_SIM_THREADS caps the worker
// count. Partial failures are reported per seed and yield exit 3.
int cmd_sweep(const std::string& config_path, const std::vector<std::uint64_t>& seeds,
              const std::string& out_dir);

int cmd_compare(const std::string& trace_a, const std::string& trace_b);

struct MeanStd {
  double mean = 0.0;
  double stdev = 0.0;
};

// Sample standard deviation (n-1 denominator); 0 for a single value.
MeanStd mean_and_sample_std(const std::vector<double>& xs);

}  // namespace fadas
