// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fadas/core.hpp"
#include "fadas/sim.hpp"

namespace fadas {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// Fixed schema, one data row per recorded round:
//   round,sim_time,eta_t,tau_max_t,train_loss,grad_norm_sq,test_acc
// test_acc is left empty when it does not apply.
extern const char* const kTraceHeader;
std::string trace_to_csv(const RunTrace& trace);

struct TraceTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // empty cells parse as NaN
};

TraceTable read_trace_csv(const std::string& path);

// Write-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

struct CompareReport {
  std::vector<std::string> columns;
  std::vector<double> max_abs_diff;  // per column
  double overall = 0.0;
};

// Per-column max absolute difference between two traces, row-aligned.
// Throws SimError on "schema mismatch" or "row count mismatch".
CompareReport compare_traces(const TraceTable& a, const TraceTable& b);

std::string summary_json(const SimConfig& cfg, const RunTrace& trace);

// fnv1a64 of the bytes, 16 lowercase hex digits.
std::string checksum_hex(const std::string& bytes);

struct ManifestEntry {
  std::string path;      // relative to the manifest's directory
  std::string checksum;  // fnv1a64 of the file bytes, hex
};

std::string manifest_json(const SimConfig& cfg,
                          const std::vector<std::uint64_t>& seeds,
                          const std::vector<ManifestEntry>& outputs);

}  // namespace fadas
