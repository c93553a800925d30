// SPDX-License-Identifier: Apache-2.0
#include "fadas/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "fadas/config_json.hpp"
#include "fadas/rng.hpp"
#include "json.hpp"

namespace fadas {

using ordered_json = nlohmann::ordered_json;

const char* const kTraceHeader =
    "round,sim_time,eta_t,tau_max_t,train_loss,grad_norm_sq,test_acc";

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trace_to_csv(const RunTrace& trace) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const FlushRecord& r : trace.records) {
    out += std::to_string(r.round);
    out += ',';
    out += format_double(r.sim_time);
    out += ',';
    out += format_double(r.eta_t);
    out += ',';
    out += std::to_string(r.tau_max_t);
    out += ',';
    out += format_double(r.train_loss);
    out += ',';
    out += format_double(r.grad_norm_sq);
    out += ',';
    if (!std::isnan(r.test_acc)) out += format_double(r.test_acc);
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TraceTable read_trace_csv(const std::string& path) {
  const std::string text = read_file(path);
  TraceTable table;
  std::stringstream lines(text);
  std::string line;
  if (!std::getline(lines, line)) throw SimError("empty trace file: " + path);
  {
    std::stringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) table.columns.push_back(col);
  }
  int lineno = 1;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(table.columns.size());
    size_t start = 0;
    for (size_t c = 0; c < table.columns.size(); ++c) {
      const size_t comma = line.find(',', start);
      const bool last = (c + 1 == table.columns.size());
      if (last != (comma == std::string::npos)) {
        throw SimError(path + ":" + std::to_string(lineno) + ": wrong column count");
      }
      const std::string cell =
          line.substr(start, last ? std::string::npos : comma - start);
      if (cell.empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        double v = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
          throw SimError(path + ":" + std::to_string(lineno) + ": bad number \"" +
                         cell + "\"");
        }
        row.push_back(v);
      }
      start = comma + 1;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SimError("cannot write file: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw SimError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw SimError("rename failed for " + path + ": " + ec.message());
}

CompareReport compare_traces(const TraceTable& a, const TraceTable& b) {
  if (a.columns != b.columns) throw SimError("schema mismatch");
  if (a.rows.size() != b.rows.size()) throw SimError("row count mismatch");
  CompareReport rep;
  rep.columns = a.columns;
  rep.max_abs_diff.assign(a.columns.size(), 0.0);
  for (size_t r = 0; r < a.rows.size(); ++r) {
    for (size_t c = 0; c < a.columns.size(); ++c) {
      const double x = a.rows[r][c];
      const double y = b.rows[r][c];
      double diff;
      if (std::isnan(x) && std::isnan(y)) {
        diff = 0.0;
      } else if (std::isnan(x) || std::isnan(y)) {
        diff = std::numeric_limits<double>::infinity();
      } else {
        diff = std::abs(x - y);
      }
      rep.max_abs_diff[c] = std::max(rep.max_abs_diff[c], diff);
    }
  }
  for (double d : rep.max_abs_diff) rep.overall = std::max(rep.overall, d);
  return rep;
}

namespace {

ordered_json json_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

std::string checksum_hex(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string(buf);
}

std::string summary_json(const SimConfig& cfg, const RunTrace& trace) {
  ordered_json j;
  j["config"] = ordered_json::parse(serialize_config(cfg));
  j["rounds"] = trace.records.size();
  const FlushRecord& last = trace.records.back();
  ordered_json fin;
  fin["round"] = last.round;
  fin["sim_time"] = last.sim_time;
  fin["eta_t"] = last.eta_t;
  fin["train_loss"] = last.train_loss;
  fin["grad_norm_sq"] = last.grad_norm_sq;
  fin["test_acc"] = json_or_null(last.test_acc);
  j["final"] = std::move(fin);
  ordered_json ds;
  ds["tau_max"] = trace.stats.tau_max;
  ds["tau_avg"] = trace.stats.tau_avg;
  ds["tau_median"] = trace.stats.tau_median;
  j["delay_stats"] = std::move(ds);
  return j.dump(2) + "\n";
}

std::string manifest_json(const SimConfig& cfg,
                          const std::vector<std::uint64_t>& seeds,
                          const std::vector<ManifestEntry>& outputs) {
  ordered_json j;
  j["config"] = ordered_json::parse(serialize_config(cfg));
  j["master_seeds"] = seeds;
  ordered_json outs = ordered_json::array();
  for (const ManifestEntry& e : outputs) {
    ordered_json o;
    o["path"] = e.path;
    o["fnv1a64"] = e.checksum;
    outs.push_back(std::move(o));
  }
  j["outputs"] = std::move(outs);
  return j.dump(2) + "\n";
}

}  // namespace fadas
