// Copyright 2026 The liftwatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line frontend: analyze leakage, sanitize a distribution, run
// Monte Carlo sweeps, and compare the greedy refinement against the
// exhaustive oracle.
//
// Exit codes: 0 success, 1 invalid input or options, 2 epsilon constraint
// unachievable (channel still written), 3 I/O failure.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liftwatch/common.hpp"
#include "liftwatch/distribution.hpp"
#include "liftwatch/experiment.hpp"
#include "liftwatch/io.hpp"
#include "liftwatch/lift.hpp"
#include "liftwatch/mechanism.hpp"
#include "liftwatch/partition.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;

std::string symbol_name(std::size_t x) { return "x" + std::to_string(x + 1); }

std::string symbol_list(const std::vector<std::size_t>& symbols) {
  std::string text;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i > 0) text += ' ';
    text += symbol_name(symbols[i]);
  }
  return text.empty() ? "(none)" : text;
}

std::string block_list(const std::vector<std::vector<std::size_t>>& blocks) {
  std::string text;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i > 0) text += ' ';
    text += '{' + symbol_list(blocks[i]) + '}';
  }
  return text.empty() ? "(none)" : text;
}

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0)) {
    throw liftwatch::Error("epsilon must be nonnegative (nats)");
  }
}

void print_channel_summary(const liftwatch::SanitizationChannel& channel) {
  const double merged = liftwatch::merged_leakage(channel);
  std::cout << "outputs          = " << channel.num_outputs() << " ("
            << channel.num_kept << " kept + "
            << channel.num_outputs() - channel.num_kept << " merged)\n";
  if (std::isnan(merged)) {
    std::cout << "merged leakage   = n/a (no merged output)\n";
  } else {
    std::cout << "merged leakage   = " << liftwatch::format_real(merged) << "\n";
  }
  std::cout << "overall leakage  = "
            << liftwatch::format_real(liftwatch::post_leakage(channel)) << "\n";
}

int run_analyze(const std::string& input, double epsilon) {
  check_epsilon(epsilon);
  const liftwatch::JointDistribution j = liftwatch::load_distribution(input);
  const liftwatch::LiftProfile profile = liftwatch::compute_lift_profile(j);
  const liftwatch::RiskSplit split = liftwatch::risk_split(profile, epsilon);

  std::cout << "input            = " << input << " (" << j.num_secrets()
            << " secrets, " << j.num_symbols() << " symbols)\n";
  std::cout << "H(X)             = "
            << liftwatch::format_real(liftwatch::entropy_x(j)) << " nats\n";
  std::cout << "epsilon          = " << liftwatch::format_real(epsilon)
            << " nats\n\n";
  std::cout << "symbol  omega             risk\n";
  for (std::size_t x = 0; x < j.num_symbols(); ++x) {
    std::string name = symbol_name(x);
    name.resize(8, ' ');
    std::string omega = liftwatch::format_real(profile.omega[x]);
    omega.resize(omega.size() < 18 ? 18 : omega.size(), ' ');
    std::cout << name << omega
              << (profile.omega[x] <= epsilon ? "low" : "high") << "\n";
  }
  std::cout << "\nlow-risk  (" << split.low_risk.size()
            << "): " << symbol_list(split.low_risk) << "\n";
  std::cout << "high-risk (" << split.high_risk.size()
            << "): " << symbol_list(split.high_risk) << "\n\n";

  std::cout << "complete merging baseline:\n";
  const liftwatch::HighRiskPartition baseline = liftwatch::complete_merging(split);
  const liftwatch::SanitizationChannel channel = liftwatch::build_channel(j, baseline);
  print_channel_summary(channel);
  std::cout << "I(X;Y)           = "
            << liftwatch::format_real(liftwatch::mutual_information(j, baseline))
            << " nats\n";
  if (j.num_symbols() > 1) {
    std::cout << "NMIL             = "
              << liftwatch::format_real(liftwatch::nmil(j, baseline)) << "\n";
  }
  const bool feasible = split.high_risk.empty() ||
                        liftwatch::subset_omega(j, split.high_risk) <= epsilon;
  std::cout << "feasible         = " << (feasible ? "yes" : "no") << "\n";
  return kExitOk;
}

int run_sanitize(const std::string& input, double epsilon,
                 const std::string& method, bool want_trace,
                 const std::string& out_path) {
  check_epsilon(epsilon);
  if (method != "greedy" && method != "complete") {
    throw liftwatch::Error("--method must be greedy or complete");
  }
  if (want_trace && method != "greedy") {
    throw liftwatch::Error("--trace requires --method greedy");
  }
  const liftwatch::JointDistribution j = liftwatch::load_distribution(input);
  const liftwatch::LiftProfile profile = liftwatch::compute_lift_profile(j);
  const liftwatch::RiskSplit split = liftwatch::risk_split(profile, epsilon);

  bool feasible = true;
  std::unique_ptr<liftwatch::HighRiskPartition> partition;
  std::unique_ptr<liftwatch::GreedyTrace> trace;
  if (method == "greedy") {
    trace = std::make_unique<liftwatch::GreedyTrace>(
        liftwatch::greedy_refine(j, split));
    partition = std::make_unique<liftwatch::HighRiskPartition>(trace->partition);
    feasible = trace->feasible;
  } else {
    partition = std::make_unique<liftwatch::HighRiskPartition>(
        liftwatch::complete_merging(split));
    feasible = split.high_risk.empty() ||
               liftwatch::subset_omega(j, split.high_risk) <= epsilon;
  }

  const liftwatch::SanitizationChannel channel =
      liftwatch::build_channel(j, *partition);
  liftwatch::write_json_file(liftwatch::channel_to_json(channel), out_path);
  if (want_trace) {
    liftwatch::write_json_file(liftwatch::trace_to_json(*trace),
                               out_path + ".trace.json");
  }

  std::cout << "method           = " << method << "\n";
  std::cout << "epsilon          = " << liftwatch::format_real(epsilon)
            << " nats\n";
  std::cout << "blocks           = " << partition->blocks().size() << ": "
            << block_list(partition->blocks()) << "\n";
  print_channel_summary(channel);
  std::cout << "I(X;Y)           = "
            << liftwatch::format_real(liftwatch::mutual_information(j, *partition))
            << " nats\n";
  if (j.num_symbols() > 1) {
    std::cout << "NMIL             = "
              << liftwatch::format_real(liftwatch::nmil(j, *partition)) << "\n";
  }
  std::cout << "feasible         = " << (feasible ? "yes" : "no") << "\n";
  std::cout << "channel written to " << out_path << "\n";
  if (want_trace) {
    std::cout << "trace written to " << out_path << ".trace.json\n";
  }
  if (!feasible) {
    std::cerr << "warning: epsilon constraint unachievable; emitted channel "
                 "equals complete merging\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

std::size_t sweep_threads_from_env() {
  const char* raw = std::getenv("LIFT_WATCHDOG_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  try {
    const long long value = std::stoll(raw);
    if (value < 0) throw liftwatch::Error("");
    return static_cast<std::size_t>(value);
  } catch (const std::exception&) {
    throw liftwatch::Error(
        "LIFT_WATCHDOG_THREADS must be a nonnegative integer");
  }
}

int run_sweep_cmd(std::size_t trials, std::size_t secrets, std::size_t symbols,
                  const std::vector<double>& epsilons, std::uint64_t seed,
                  const std::string& out_csv, const std::string& out_json) {
  const liftwatch::SweepConfig config(trials, secrets, symbols, epsilons, seed);
  const liftwatch::SweepResult result =
      liftwatch::run_sweep(config, sweep_threads_from_env());
  liftwatch::emit_csv(result, out_csv);
  if (!out_json.empty()) {
    liftwatch::write_json_file(liftwatch::sweep_to_json(result), out_json);
  }

  std::cout << "sweep: trials=" << trials << " secrets=" << secrets
            << " symbols=" << symbols << " seed=" << seed << "\n";
  std::cout << "epsilon      greedy NMIL       complete NMIL     infeasible\n";
  for (const liftwatch::EpsilonStats& stats : result.per_epsilon) {
    std::string eps = liftwatch::format_real(stats.epsilon);
    eps.resize(eps.size() < 13 ? 13 : eps.size(), ' ');
    std::string g = liftwatch::format_real(stats.greedy.mean_nmil);
    g.resize(g.size() < 18 ? 18 : g.size(), ' ');
    std::string c = liftwatch::format_real(stats.complete.mean_nmil);
    c.resize(c.size() < 18 ? 18 : c.size(), ' ');
    std::cout << eps << g << c << stats.greedy.infeasible_count << "\n";
  }
  std::cout << "csv written to " << out_csv << "\n";
  if (!out_json.empty()) {
    std::cout << "json written to " << out_json << "\n";
  }
  return kExitOk;
}

int run_oracle(const std::string& input, double epsilon) {
  check_epsilon(epsilon);
  const liftwatch::JointDistribution j = liftwatch::load_distribution(input);
  const liftwatch::LiftProfile profile = liftwatch::compute_lift_profile(j);
  const liftwatch::RiskSplit split = liftwatch::risk_split(profile, epsilon);

  const liftwatch::GreedyTrace trace = liftwatch::greedy_refine(j, split);
  const double greedy_utility = liftwatch::mutual_information(j, trace.partition);
  const liftwatch::OracleResult oracle = liftwatch::brute_force_optimal(j, split);

  std::cout << "high-risk size   = " << split.high_risk.size() << "\n";
  std::cout << "greedy utility   = " << liftwatch::format_real(greedy_utility)
            << " nats (feasible=" << (trace.feasible ? "yes" : "no")
            << ", blocks=" << trace.partition.blocks().size() << ")\n";
  if (oracle.feasible()) {
    std::cout << "optimal utility  = " << liftwatch::format_real(oracle.utility)
              << " nats (blocks=" << oracle.partition->blocks().size() << ": "
              << block_list(oracle.partition->blocks()) << ")\n";
    std::cout << "optimality gap   = "
              << liftwatch::format_real(oracle.utility - greedy_utility)
              << " nats\n";
  } else {
    std::cout << "optimal utility  = infeasible (no partition meets epsilon)\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lift-based watchdog privacy: leakage analysis, subset-merging "
      "sanitization, Monte Carlo sweeps"};
  app.require_subcommand(1);

  std::string input;
  double epsilon = 0.0;
  std::string method = "greedy";
  bool want_trace = false;
  std::string out_path;
  std::string out_json;
  std::size_t trials = 1000;
  std::size_t secrets = 13;
  std::size_t symbols = 20;
  std::vector<double> epsilons;
  std::uint64_t seed = 0;

  CLI::App* analyze =
      app.add_subcommand("analyze", "Print the leakage profile and risk split");
  analyze->add_option("--input", input, "distribution file (.json or .csv)")
      ->required();
  analyze->add_option("--epsilon", epsilon, "privacy budget in nats")
      ->required();

  CLI::App* sanitize =
      app.add_subcommand("sanitize", "Build and export a sanitization channel");
  sanitize->add_option("--input", input, "distribution file (.json or .csv)")
      ->required();
  sanitize->add_option("--epsilon", epsilon, "privacy budget in nats")
      ->required();
  sanitize->add_option("--method", method, "greedy or complete");
  sanitize->add_flag("--trace", want_trace,
                     "also write the merge trace next to --out");
  sanitize->add_option("--out", out_path, "channel JSON output path")
      ->required();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Monte Carlo sweep comparing greedy and complete merging");
  sweep->add_option("--trials", trials, "number of random joints")->required();
  sweep->add_option("--secrets", secrets, "|S|")->required();
  sweep->add_option("--symbols", symbols, "|X|")->required();
  sweep->add_option("--epsilons", epsilons, "comma-separated budgets in nats")
      ->required()
      ->delimiter(',');
  sweep->add_option("--seed", seed, "master RNG seed")->required();
  sweep->add_option("--out", out_path, "CSV output path")->required();
  sweep->add_option("--json", out_json, "optional JSON output path");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Compare greedy against the exhaustive optimal partition");
  oracle->add_option("--input", input, "distribution file (.json or .csv)")
      ->required();
  oracle->add_option("--epsilon", epsilon, "privacy budget in nats")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (app.got_subcommand(analyze)) return run_analyze(input, epsilon);
    if (app.got_subcommand(sanitize)) {
      return run_sanitize(input, epsilon, method, want_trace, out_path);
    }
    if (app.got_subcommand(sweep)) {
      return run_sweep_cmd(trials, secrets, symbols, epsilons, seed, out_path,
                           out_json);
    }
    if (app.got_subcommand(oracle)) return run_oracle(input, epsilon);
  } catch (const liftwatch::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
