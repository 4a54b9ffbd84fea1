// Copyright 2026 The rcds Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment driver behind the command line tool: runs algorithm x model
// grids over instance files, writes result rows as CSV, builds ratio tables
// against the polymatroid baseline, and reports oracle comparisons.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rcds/bounds.hpp"
#include "rcds/error.hpp"
#include "rcds/instance_io.hpp"
#include "rcds/oracle.hpp"
#include "rcds/parallel.hpp"
#include "rcds/policies.hpp"
#include "rcds/rational.hpp"

namespace rcds {

inline constexpr const char* kCsvHeader =
    "instance_id,family,n,M,algorithm,model,w_avg,w_avg_active,max_rounds,runtime_ms,seed";

struct ResultRow {
  std::string instance_id;
  std::string family;
  int n = 0;
  std::int64_t m = 0;
  std::string algorithm;
  std::string model;
  std::string w_avg;         // 9 decimals, truncated
  std::string w_avg_active;  // 9 decimals, truncated
  int max_rounds = 0;
  std::int64_t runtime_ms = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline std::string to_csv_line(const ResultRow& r) {
  std::ostringstream out;
  out << r.instance_id << ',' << r.family << ',' << r.n << ',' << r.m << ',' << r.algorithm << ','
      << r.model << ',' << r.w_avg << ',' << r.w_avg_active << ',' << r.max_rounds << ','
      << r.runtime_ms << ',' << r.seed;
  return out.str();
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

template <class T>
T parse_number(const std::string& s, const std::string& where) {
  T v{};
  std::istringstream in(s);
  in >> v;
  if (!in || !in.eof() || std::to_string(v) != s) throw FormatError(where + ": bad number '" + s + "'");
  return v;
}

inline void check_csv_token(const std::string& s, const char* what) {
  if (s.find_first_of(",\n\r") != std::string::npos) {
    throw FormatError(std::string(what) + " '" + s + "' contains a CSV separator");
  }
}

}  // namespace detail

inline ResultRow parse_csv_line(const std::string& line, std::size_t lineno = 0) {
  const auto cols = detail::split_csv(line);
  const std::string where = "line " + std::to_string(lineno);
  if (cols.size() != 11) {
    throw FormatError(where + ": expected 11 columns, found " + std::to_string(cols.size()));
  }
  ResultRow r;
  r.instance_id = cols[0];
  r.family = cols[1];
  r.n = detail::parse_number<int>(cols[2], where + " n");
  r.m = detail::parse_number<std::int64_t>(cols[3], where + " M");
  r.algorithm = cols[4];
  r.model = cols[5];
  r.w_avg = cols[6];
  r.w_avg_active = cols[7];
  try {
    parse_rational(r.w_avg);
    parse_rational(r.w_avg_active);
  } catch (const Error&) {
    throw FormatError(where + ": w_avg columns must be decimals");
  }
  r.max_rounds = detail::parse_number<int>(cols[8], where + " max_rounds");
  r.runtime_ms = detail::parse_number<std::int64_t>(cols[9], where + " runtime_ms");
  r.seed = detail::parse_number<std::uint64_t>(cols[10], where + " seed");
  return r;
}

inline std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ResultRow> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != kCsvHeader) throw FormatError("line 1: unexpected CSV header");
      continue;
    }
    if (line.empty()) continue;
    rows.push_back(parse_csv_line(line, lineno));
  }
  if (lineno == 0) throw FormatError("line 1: missing CSV header");
  return rows;
}

inline std::string results_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) out += to_csv_line(r) + "\n";
  return out;
}

inline std::vector<ResultRow> read_results_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_results_csv(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

// Appends rows, writing the header first when the file is new or empty. An
// existing file must start with the same header.
inline void append_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  if (!fresh) {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    if (first != kCsvHeader) throw FormatError(path + ": line 1: unexpected CSV header");
  }
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(path + ": cannot open for writing");
  if (fresh) out << kCsvHeader << "\n";
  for (const auto& r : rows) out << to_csv_line(r) << "\n";
  if (!out) throw Error(path + ": write failed");
}

struct NamedInstance {
  std::string id;
  InstanceFile file;
};

inline NamedInstance load_named_instance(const std::string& path) {
  return {std::filesystem::path(path).stem().string(), read_instance_file(path)};
}

struct RunSpec {
  std::vector<Algorithm> algorithms;
  std::vector<FeedbackModel> models;
  std::uint64_t seed = 0;
  SolverLimits limits;
};

inline ResultRow run_cell(const NamedInstance& ni, Algorithm a, FeedbackModel m, const RunSpec& grid,
                          unsigned scenario_threads) {
  detail::check_csv_token(ni.id, "instance id");
  detail::check_csv_token(ni.file.family, "family");
  const auto t0 = std::chrono::steady_clock::now();
  PolicyOptions opt;
  opt.seed = grid.seed;
  opt.limits = grid.limits;
  const WavgReport rep = evaluate_policy_wavg(ni.file.instance, m, a, opt, scenario_threads);
  const auto t1 = std::chrono::steady_clock::now();
  ResultRow row;
  row.instance_id = ni.id;
  row.family = ni.file.family;
  row.n = ni.file.instance.graph().size();
  row.m = ni.file.instance.scenarios().denominator();
  row.algorithm = to_string(a);
  row.model = to_string(m);
  row.w_avg = to_decimal(rep.w_avg);
  row.w_avg_active = to_decimal(rep.w_avg_active);
  row.max_rounds = rep.max_rounds;
  row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  row.seed = grid.seed;
  return row;
}

// One row per (instance, algorithm, model) in that nesting order. Cells run
// on up to `threads` workers; each cell evaluates its scenarios sequentially.
inline std::vector<ResultRow> run_grid(const std::vector<NamedInstance>& instances,
                                       const RunSpec& grid, unsigned threads = worker_threads()) {
  if (grid.algorithms.empty() || grid.models.empty()) {
    throw PreconditionError("run needs at least one algorithm and one model");
  }
  std::vector<std::tuple<std::size_t, Algorithm, FeedbackModel>> cells;
  for (std::size_t i = 0; i < instances.size(); ++i)
    for (Algorithm a : grid.algorithms)
      for (FeedbackModel m : grid.models) cells.emplace_back(i, a, m);
  std::vector<ResultRow> rows(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t c) {
    const auto& [i, a, m] = cells[c];
    rows[c] = run_cell(instances[i], a, m, grid, 1);
  });
  return rows;
}

struct RatioLine {
  std::string instance_id;
  std::string model;
  std::string algorithm;
  double ratio = 0;
};

struct RatioSummary {
  std::string algorithm;
  std::string model;
  int count = 0;
  double min = 0, max = 0, mean = 0;
};

struct CompareResult {
  std::vector<RatioLine> lines;
  std::vector<RatioSummary> summary;
};

// Ratio of each algorithm's w_avg to the polymatroid row on the same
// (instance, model). The last row wins when a cell appears more than once.
inline CompareResult compare_rows(const std::vector<ResultRow>& rows,
                                  const std::string& baseline = "polymatroid") {
  using Key = std::pair<std::string, std::string>;  // (instance, model)
  std::map<Key, std::map<std::string, Rational>> cells;
  for (const auto& r : rows) cells[{r.instance_id, r.model}][r.algorithm] = parse_rational(r.w_avg);
  CompareResult out;
  std::map<std::pair<std::string, std::string>, std::vector<double>> by_alg;
  for (const auto& [key, algs] : cells) {
    auto base = algs.find(baseline);
    if (base == algs.end()) {
      throw MissingBaselineError("no " + baseline + " row for instance " + key.first + ", model " +
                                 key.second);
    }
    for (const auto& [alg, w] : algs) {
      double ratio;
      if (is_zero(base->second)) {
        ratio = is_zero(w) ? 1.0 : std::numeric_limits<double>::infinity();
      } else {
        ratio = to_double(w / base->second);
      }
      out.lines.push_back({key.first, key.second, alg, ratio});
      by_alg[{alg, key.second}].push_back(ratio);
    }
  }
  for (const auto& [key, ratios] : by_alg) {
    RatioSummary s{key.first, key.second, static_cast<int>(ratios.size()), ratios[0], ratios[0], 0};
    double total = 0;
    for (double r : ratios) {
      s.min = std::min(s.min, r);
      s.max = std::max(s.max, r);
      total += r;
    }
    s.mean = total / static_cast<double>(ratios.size());
    out.summary.push_back(s);
  }
  return out;
}

inline std::string format_ratio(double r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << r;
  return out.str();
}

inline std::string compare_report(const CompareResult& c) {
  std::ostringstream out;
  out << "instance_id,model,algorithm,ratio\n";
  for (const auto& l : c.lines)
    out << l.instance_id << ',' << l.model << ',' << l.algorithm << ',' << format_ratio(l.ratio) << '\n';
  out << "\nalgorithm,model,count,min,max,mean\n";
  for (const auto& s : c.summary) {
    out << s.algorithm << ',' << s.model << ',' << s.count << ',' << format_ratio(s.min) << ','
        << format_ratio(s.max) << ',' << format_ratio(s.mean) << '\n';
  }
  out << "\nreference band for borgs on unit-disk graphs: 1.359 to 1.588\n";
  return out.str();
}

struct OracleLine {
  std::string algorithm;
  Rational w_avg = 0;
  Rational ratio = 0;
  bool within_bound = false;
};

struct OracleResult {
  FeedbackModel model = FeedbackModel::Full;
  Rational optimum = 0;
  Rational delta = 1;
  std::vector<OracleLine> lines;
};

inline OracleResult oracle_compare(const Instance& inst, FeedbackModel model,
                                   const std::vector<Algorithm>& algorithms,
                                   const OracleLimits& limits, const PolicyOptions& opt = {}) {
  OracleResult out;
  out.model = model;
  out.optimum = optimal_wavg(inst, model, limits);
  out.delta = inst.scenarios().delta();
  for (Algorithm a : algorithms) {
    OracleLine l;
    l.algorithm = to_string(a);
    l.w_avg = evaluate_policy_wavg(inst, model, a, opt).w_avg;
    l.ratio = is_zero(out.optimum) ? Rational(1) : l.w_avg / out.optimum;
    l.within_bound = within_approx_bound(l.w_avg, out.optimum, out.delta);
    out.lines.push_back(l);
  }
  return out;
}

inline std::string oracle_report(const std::string& id, const OracleResult& r) {
  std::ostringstream out;
  out << "instance " << id << " model " << to_string(r.model) << "\n";
  out << "optimal_wavg " << to_string(r.optimum) << " (" << to_decimal(r.optimum) << ")\n";
  out << "delta " << to_string(r.delta) << " bound 2(1+lg(1/delta)) = "
      << format_ratio(approx_factor(r.delta)) << "\n";
  for (const auto& l : r.lines) {
    out << l.algorithm << " w_avg " << to_string(l.w_avg) << " (" << to_decimal(l.w_avg)
        << ") ratio " << to_decimal(l.ratio, 6) << " within_bound "
        << (l.within_bound ? "yes" : "no") << "\n";
  }
  return out.str();
}

}  // namespace rcds
