// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fadas/cli.hpp"

namespace {

bool parse_seeds(const std::string& arg, std::vector<std::uint64_t>& seeds) {
  size_t start = 0;
  while (start <= arg.size()) {
    const size_t comma = arg.find(',', start);
    const std::string tok =
        arg.substr(start, comma == std::string::npos ? std::string::npos
                                                     : comma - start);
    if (tok.empty()) return false;
    try {
      size_t used = 0;
      seeds.push_back(std::stoull(tok, &used));
      if (used != tok.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return !seeds.empty();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Buffered asynchronous federated learning simulator"};
  app.require_subcommand(1);

  std::string run_config, run_out;
  std::vector<std::string> overrides;
  CLI::App* run = app.add_subcommand("run", "Run one simulation");
  run->add_option("--config", run_config, "JSON config file")->required();
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_option("--set", overrides, "Override a config field (key.path=value)");

  std::string sweep_config, sweep_out, seeds_arg;
  CLI::App* sweep = app.add_subcommand("sweep", "Run one simulation per master seed");
  sweep->add_option("--config", sweep_config, "JSON config file")->required();
  sweep->add_option("--seeds", seeds_arg, "Comma-separated master seeds")->required();
  sweep->add_option("--out", sweep_out, "Output directory")->required();

  std::string trace_a, trace_b;
  CLI::App* compare =
      app.add_subcommand("compare", "Max per-column difference of two traces");
  compare->add_option("a", trace_a, "First trace.csv")->required();
  compare->add_option("b", trace_b, "Second trace.csv")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return fadas::cmd_run(run_config, run_out, overrides);
  if (sweep->parsed()) {
    std::vector<std::uint64_t> seeds;
    if (!parse_seeds(seeds_arg, seeds)) {
      std::cerr << "error: bad seed list: " << seeds_arg << '\n';
      return 2;
    }
    return fadas::cmd_sweep(sweep_config, seeds, sweep_out);
  }
  return fadas::cmd_compare(trace_a, trace_b);
}
