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

// Command line driver: generate | run | compare | oracle.
//
// Exit codes: 0 ok, 2 usage, 3 malformed input, 4 oracle size guard,
// 5 missing baseline rows, 1 anything else.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcds.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kMalformed = 3;
constexpr int kSizeGuard = 4;
constexpr int kMissingBaseline = 5;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<rcds::Algorithm> parse_algorithms(const std::vector<std::string>& names) {
  std::vector<rcds::Algorithm> out;
  for (const auto& s : names) {
    auto a = rcds::parse_algorithm(s);
    if (!a) throw UsageError("unknown algorithm '" + s + "'");
    out.push_back(*a);
  }
  return out;
}

std::vector<rcds::FeedbackModel> parse_models(const std::vector<std::string>& names) {
  std::vector<rcds::FeedbackModel> out;
  for (const auto& s : names) {
    auto m = rcds::parse_model(s);
    if (!m) throw UsageError("unknown feedback model '" + s + "'");
    out.push_back(*m);
  }
  return out;
}

rcds::Rational rational_arg(const std::string& text, const char* flag) {
  try {
    return rcds::parse_rational(text);
  } catch (const rcds::Error&) {
    throw UsageError(std::string(flag) + ": expected a rational, got '" + text + "'");
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rcds::Error(path + ": cannot open for writing");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive robust connected dominating set experiments"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write an instance file");
  gen->alias("gen");
  std::string family;
  std::optional<int> n;
  int m = 30;
  std::uint64_t seed = 0;
  std::string threshold_max, output;
  int failure_points = 7, max_retries = 100;
  bool require_connected = false;
  std::string wa = "1", wb = "2", wc = "3", eps = "1/10", delta = "1/100", fixture_model = "local";
  int n_prime = 20, k = 10;
  gen->add_option("--family", family,
                  "unit-disk | bidirectional-disk | erdos-renyi | three-branch | greedy-bad | cds-bad | path3")
      ->required();
  gen->add_option("--n", n, "Node count (random families)");
  gen->add_option("--m", m, "Scenario count M (random families)");
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--threshold-max", threshold_max, "Upper end of the failure threshold range");
  gen->add_option("--failure-points", failure_points, "Failure points per scenario");
  gen->add_option("--max-retries", max_retries, "Connectivity retries");
  gen->add_flag("--require-connected", require_connected, "Fail instead of keeping a disconnected graph");
  gen->add_option("--wa", wa, "three-branch: w(a)");
  gen->add_option("--wb", wb, "three-branch: w(b)");
  gen->add_option("--wc", wc, "three-branch: w(c)");
  gen->add_option("--n-prime", n_prime, "greedy-bad: n'");
  gen->add_option("--eps", eps, "greedy-bad: epsilon");
  gen->add_option("--k", k, "cds-bad: k");
  gen->add_option("--delta", delta, "cds-bad: delta");
  gen->add_option("--model", fixture_model, "cds-bad: full | local");
  gen->add_option("--output", output, "Output path (stdout when omitted)");

  // run
  auto* run = app.add_subcommand("run", "Evaluate algorithms on instance files and append CSV rows");
  std::vector<std::string> instances;
  std::vector<std::string> algorithms{"polymatroid", "greedy", "cds-based", "borgs"};
  std::vector<std::string> models{"full", "local"};
  std::string csv_out;
  std::uint64_t run_seed = 0;
  run->add_option("--instance", instances, "Instance file (repeatable)")->required();
  run->add_option("--algorithm", algorithms, "polymatroid | greedy | cds-based | borgs (repeatable)");
  run->add_option("--model", models, "full | local (repeatable)");
  run->add_option("--seed", run_seed, "Seed for randomized policies");
  run->add_option("--output", csv_out, "CSV file to append to (stdout when omitted)");

  // compare
  auto* cmp = app.add_subcommand("compare", "Ratio table against the polymatroid rows");
  std::string results;
  std::string baseline = "polymatroid";
  cmp->add_option("--results", results, "Results CSV")->required();
  cmp->add_option("--baseline", baseline, "Baseline algorithm");

  // oracle
  auto* orc = app.add_subcommand("oracle", "Optimal policy value and per-algorithm ratios");
  std::string oracle_instance;
  std::vector<std::string> oracle_models{"full", "local"};
  std::vector<std::string> oracle_algorithms{"polymatroid", "greedy", "cds-based", "borgs"};
  rcds::OracleLimits limits;
  std::uint64_t oracle_seed = 0;
  orc->add_option("--instance", oracle_instance, "Instance file")->required();
  orc->add_option("--model", oracle_models, "full | local (repeatable)");
  orc->add_option("--algorithm", oracle_algorithms, "Algorithms to compare (repeatable)");
  orc->add_option("--max-nodes", limits.max_nodes, "Size guard on n");
  orc->add_option("--max-scenarios", limits.max_scenarios, "Size guard on |Psi|");
  orc->add_option("--seed", oracle_seed, "Seed for randomized policies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == gen) {
      rcds::Instance inst;
      if (auto f = rcds::parse_family(family)) {
        if (!n) throw UsageError("--n is required for family " + family);
        rcds::GeneratorConfig cfg;
        cfg.family = *f;
        cfg.n = *n;
        cfg.m_scenarios = m;
        cfg.seed = seed;
        if (!threshold_max.empty()) cfg.threshold_max = rational_arg(threshold_max, "--threshold-max");
        cfg.failure_points = failure_points;
        cfg.max_retries = max_retries;
        cfg.require_connected = require_connected;
        inst = rcds::generate_instance(cfg);
      } else if (family == "three-branch") {
        inst = rcds::fixture_three_branch(rational_arg(wa, "--wa"), rational_arg(wb, "--wb"),
                                  rational_arg(wc, "--wc"));
      } else if (family == "greedy-bad") {
        inst = rcds::fixture_greedy_bad(n_prime, rational_arg(eps, "--eps"));
      } else if (family == "cds-bad") {
        auto fm = rcds::parse_model(fixture_model);
        if (!fm) throw UsageError("--model must be full or local");
        inst = rcds::fixture_cds_bad(k, rational_arg(delta, "--delta"), *fm);
      } else if (family == "path3") {
        inst = rcds::fixture_path3();
      } else {
        throw UsageError("unknown family '" + family + "'");
      }
      emit(rcds::instance_to_json(inst, family), output);
    } else if (active == run) {
      rcds::RunSpec grid;
      grid.algorithms = parse_algorithms(algorithms);
      grid.models = parse_models(models);
      grid.seed = run_seed;
      std::vector<rcds::NamedInstance> loaded;
      for (const auto& p : instances) loaded.push_back(rcds::load_named_instance(p));
      const auto rows = rcds::run_grid(loaded, grid);
      if (csv_out.empty() || csv_out == "-") {
        std::cout << rcds::results_to_csv(rows);
      } else {
        rcds::append_results_csv(csv_out, rows);
      }
    } else if (active == cmp) {
      std::cout << rcds::compare_report(rcds::compare_rows(rcds::read_results_csv(results), baseline));
    } else if (active == orc) {
      const auto ni = rcds::load_named_instance(oracle_instance);
      const auto algs = parse_algorithms(oracle_algorithms);
      rcds::PolicyOptions opt;
      opt.seed = oracle_seed;
      for (auto model : parse_models(oracle_models)) {
        std::cout << rcds::oracle_report(ni.id, rcds::oracle_compare(ni.file.instance, model, algs,
                                                                     limits, opt));
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return kUsage;
  } catch (const rcds::PreconditionError& e) {
    // Argument values the library rejects, e.g. n < 2 or k * delta >= 1.
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return kUsage;
  } catch (const rcds::FormatError& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kMalformed;
  } catch (const rcds::SizeGuardError& e) {
    std::cerr << "size guard: " << e.what() << "\n";
    return kSizeGuard;
  } catch (const rcds::MissingBaselineError& e) {
    std::cerr << "missing baseline: " << e.what() << "\n";
    return kMissingBaseline;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
