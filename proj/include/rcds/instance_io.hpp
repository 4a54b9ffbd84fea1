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

// JSON instance files:
//
//   {"version": 1, "n": 3, "root": 0,
//    "weights": [[0, 1], [1, 1], [2, 1]],
//    "edges": [[0, 1], [1, 2]],
//    "positions": [[[x_num, x_den], [y_num, y_den]], ...],   optional
//    "scenarios": [{"states": "111", "k": 1}],
//    "M": 1,
//    "family": "path3"}                                       optional
//
// Character i of `states` is node i ('1' active). Scenario probabilities are
// k/M. Every validation failure is reported as a FormatError naming the line
// (for syntax errors) or the offending field.

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rcds/error.hpp"
#include "rcds/graph.hpp"
#include "rcds/rational.hpp"
#include "rcds/scenario.hpp"

namespace rcds {

struct InstanceFile {
  Instance instance;
  std::string family = "custom";
};

namespace detail {

using nlohmann::json;

inline json rational_json(const Rational& r) { return json::array({r.numerator(), r.denominator()}); }

inline const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw FormatError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(path + "." + key + ": missing field");
  return *it;
}

inline std::int64_t int_field(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw FormatError(path + ": expected an integer");
  return v.get<std::int64_t>();
}

inline Rational rational_field(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw FormatError(path + ": expected [numerator, denominator]");
  const std::int64_t num = int_field(v[0], path + "[0]");
  const std::int64_t den = int_field(v[1], path + "[1]");
  if (den <= 0) throw FormatError(path + ": denominator must be positive");
  return Rational(num, den);
}

inline std::string syntax_location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline std::string instance_to_json(const Instance& inst, const std::string& family = "custom") {
  using detail::json;
  const Graph& g = inst.graph();
  const ScenarioSet& s = inst.scenarios();
  json j = json::object();
  j["version"] = 1;
  j["family"] = family;
  j["n"] = g.size();
  j["root"] = g.root();
  json weights = json::array();
  for (const auto& w : g.weights()) weights.push_back(detail::rational_json(w));
  j["weights"] = weights;
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back(json::array({u, v}));
  j["edges"] = edges;
  if (g.positions()) {
    json pos = json::array();
    for (const auto& p : *g.positions())
      pos.push_back(json::array({detail::rational_json(p.x), detail::rational_json(p.y)}));
    j["positions"] = pos;
  }
  json scen = json::array();
  for (const auto& sc : s.scenarios()) {
    scen.push_back(json{{"states", sc.state.active.to_bitstring(g.size())}, {"k", sc.k}});
  }
  j["scenarios"] = scen;
  j["M"] = s.denominator();
  return j.dump(1) + "\n";
}

inline InstanceFile instance_from_json(const std::string& text) {
  using detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("JSON syntax error at " + detail::syntax_location(text, e.byte) + ": " +
                      e.what());
  }
  if (!j.is_object()) throw FormatError("$: expected a JSON object");
  if (detail::int_field(detail::field(j, "$", "version"), "$.version") != 1) {
    throw FormatError("$.version: only version 1 is supported");
  }
  InstanceFile out;
  if (auto it = j.find("family"); it != j.end()) {
    if (!it->is_string()) throw FormatError("$.family: expected a string");
    out.family = it->get<std::string>();
  }
  const std::int64_t n = detail::int_field(detail::field(j, "$", "n"), "$.n");
  if (n < 1 || static_cast<std::size_t>(n) > kMaxNodes) {
    throw FormatError("$.n: must be in [1, " + std::to_string(kMaxNodes) + "]");
  }
  const std::int64_t root = detail::int_field(detail::field(j, "$", "root"), "$.root");
  if (root < 0 || root >= n) throw FormatError("$.root: node id out of range");

  const json& jw = detail::field(j, "$", "weights");
  if (!jw.is_array() || static_cast<std::int64_t>(jw.size()) != n) {
    throw FormatError("$.weights: expected an array of n entries");
  }
  std::vector<Rational> weights;
  for (std::size_t i = 0; i < jw.size(); ++i) {
    const std::string path = "$.weights[" + std::to_string(i) + "]";
    weights.push_back(detail::rational_field(jw[i], path));
    if (weights.back() < 0) throw FormatError(path + ": weight must be nonnegative");
  }

  const json& je = detail::field(j, "$", "edges");
  if (!je.is_array()) throw FormatError("$.edges: expected an array");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < je.size(); ++i) {
    const std::string path = "$.edges[" + std::to_string(i) + "]";
    if (!je[i].is_array() || je[i].size() != 2) throw FormatError(path + ": expected [u, v]");
    const std::int64_t u = detail::int_field(je[i][0], path + "[0]");
    const std::int64_t v = detail::int_field(je[i][1], path + "[1]");
    if (u < 0 || u >= n || v < 0 || v >= n) throw FormatError(path + ": node id out of range");
    if (u == v) throw FormatError(path + ": self-loop");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }

  std::optional<std::vector<Point>> positions;
  if (auto it = j.find("positions"); it != j.end()) {
    if (!it->is_array() || static_cast<std::int64_t>(it->size()) != n) {
      throw FormatError("$.positions: expected an array of n entries");
    }
    positions.emplace();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "$.positions[" + std::to_string(i) + "]";
      const json& p = (*it)[i];
      if (!p.is_array() || p.size() != 2) throw FormatError(path + ": expected [x, y]");
      positions->push_back({detail::rational_field(p[0], path + "[0]"),
                            detail::rational_field(p[1], path + "[1]")});
    }
  }

  const std::int64_t m = detail::int_field(detail::field(j, "$", "M"), "$.M");
  if (m <= 0) throw FormatError("$.M: must be positive");
  const json& js = detail::field(j, "$", "scenarios");
  if (!js.is_array() || js.empty()) throw FormatError("$.scenarios: expected a nonempty array");
  std::vector<std::pair<NodeSet, std::int64_t>> entries;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < js.size(); ++i) {
    const std::string path = "$.scenarios[" + std::to_string(i) + "]";
    const json& st = detail::field(js[i], path, "states");
    if (!st.is_string()) throw FormatError(path + ".states: expected a string");
    const auto bits = st.get<std::string>();
    if (static_cast<std::int64_t>(bits.size()) != n) {
      throw FormatError(path + ".states: expected " + std::to_string(n) + " characters");
    }
    NodeSet active;
    for (std::size_t v = 0; v < bits.size(); ++v) {
      if (bits[v] == '1') {
        active.insert(static_cast<int>(v));
      } else if (bits[v] != '0') {
        throw FormatError(path + ".states: character " + std::to_string(v) + " is not 0 or 1");
      }
    }
    if (!active.contains(static_cast<int>(root))) throw FormatError(path + ".states: root is inactive");
    const std::int64_t k = detail::int_field(detail::field(js[i], path, "k"), path + ".k");
    if (k <= 0) throw FormatError(path + ".k: must be positive");
    total += k;
    entries.emplace_back(active, k);
  }
  if (total != m) {
    throw FormatError("$.scenarios: numerators sum to " + std::to_string(total) + ", expected M = " +
                      std::to_string(m));
  }
  try {
    Graph g(static_cast<int>(n), edges, std::move(weights), static_cast<NodeId>(root),
            std::move(positions));
    ScenarioSet s(static_cast<int>(n), static_cast<NodeId>(root), std::move(entries), m);
    out.instance = Instance(std::move(g), std::move(s));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("$: ") + e.what());
  }
  return out;
}

inline InstanceFile read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return instance_from_json(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_instance_file(const std::string& path, const Instance& inst,
                                const std::string& family = "custom") {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path + ": cannot open for writing");
  out << instance_to_json(inst, family);
  if (!out) throw Error(path + ": write failed");
}

}  // namespace rcds
