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
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "liftwatch/common.hpp"
#include "liftwatch/distribution.hpp"
#include "liftwatch/errors.hpp"
#include "liftwatch/experiment.hpp"
#include "liftwatch/mechanism.hpp"
#include "liftwatch/partition.hpp"

namespace liftwatch {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed while reading " + path);
  return buffer.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("failed while writing " + path);
}

/// Parses a joint distribution from JSON:
/// { "num_secrets": int, "num_symbols": int, "mass": [[...], ...] }.
inline JointDistribution distribution_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("num_secrets") ||
      !doc.contains("num_symbols") || !doc.contains("mass")) {
    throw Error("distribution JSON needs num_secrets, num_symbols, mass");
  }
  const auto num_secrets = doc.at("num_secrets").get<std::int64_t>();
  const auto num_symbols = doc.at("num_symbols").get<std::int64_t>();
  const auto& mass = doc.at("mass");
  if (num_secrets < 1 || num_symbols < 1) {
    throw Error("distribution JSON sizes must be positive");
  }
  if (!mass.is_array() ||
      mass.size() != static_cast<std::size_t>(num_secrets)) {
    throw Error("distribution JSON mass must have num_secrets rows");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(mass.size());
  for (const auto& row : mass) {
    if (!row.is_array() ||
        row.size() != static_cast<std::size_t>(num_symbols)) {
      throw Error("distribution JSON mass must have num_symbols columns");
    }
    rows.push_back(row.get<std::vector<double>>());
  }
  return JointDistribution(rows);
}

/// Parses a headerless CSV of |S| rows by |X| columns.
inline JointDistribution distribution_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error("CSV cell is not a number: '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("CSV contains no data rows");
  return JointDistribution(rows);
}

/// Loads a distribution from a .json or .csv file. Unknown extensions are
/// sniffed: content starting with '{' is treated as JSON.
inline JointDistribution load_distribution(const std::string& path) {
  const std::string text = read_text_file(path);
  bool as_json;
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    as_json = true;
  } else if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    as_json = false;
  } else {
    const auto first = text.find_first_not_of(" \t\r\n");
    as_json = first != std::string::npos && text[first] == '{';
  }
  if (as_json) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error("cannot parse " + path + " as JSON: " + e.what());
    }
    try {
      return distribution_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
      throw Error("malformed distribution in " + path + ": " + e.what());
    }
  }
  return distribution_from_csv(text);
}

inline nlohmann::json distribution_to_json(const JointDistribution& j) {
  nlohmann::json mass = nlohmann::json::array();
  for (std::size_t s = 0; s < j.num_secrets(); ++s) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t x = 0; x < j.num_symbols(); ++x) row.push_back(j.mass(s, x));
    mass.push_back(std::move(row));
  }
  return nlohmann::json{{"num_secrets", j.num_secrets()},
                        {"num_symbols", j.num_symbols()},
                        {"mass", std::move(mass)}};
}

inline std::string distribution_to_csv(const JointDistribution& j) {
  std::string text;
  for (std::size_t s = 0; s < j.num_secrets(); ++s) {
    for (std::size_t x = 0; x < j.num_symbols(); ++x) {
      if (x > 0) text += ',';
      text += format_real(j.mass(s, x));
    }
    text += '\n';
  }
  return text;
}

/// Channel export: { "output_symbols": [[source indices]], "transition":
/// [[p(y|x)]] }. Output symbol k lists the 0-based input symbols mapped
/// onto it; rows of the transition follow the input alphabet.
inline nlohmann::json channel_to_json(const SanitizationChannel& ch) {
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& sources : ch.output_sources) outputs.push_back(sources);
  nlohmann::json transition = nlohmann::json::array();
  for (std::size_t x = 0; x < ch.num_inputs; ++x) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t y = 0; y < ch.num_outputs(); ++y) {
      row.push_back(ch.transition_at(x, y));
    }
    transition.push_back(std::move(row));
  }
  return nlohmann::json{{"output_symbols", std::move(outputs)},
                        {"transition", std::move(transition)}};
}

inline const char* merge_step_kind_name(MergeStepKind kind) {
  switch (kind) {
    case MergeStepKind::kSeed:
      return "seed";
    case MergeStepKind::kGrow:
      return "grow";
    case MergeStepKind::kFixup:
      return "fixup";
  }
  return "unknown";
}

inline nlohmann::json trace_to_json(const GreedyTrace& trace) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& block : trace.partition.blocks()) blocks.push_back(block);
  nlohmann::json log = nlohmann::json::array();
  for (const MergeStep& step : trace.merge_log) {
    log.push_back(nlohmann::json{{"kind", merge_step_kind_name(step.kind)},
                                 {"block", step.block},
                                 {"symbols", step.symbols},
                                 {"omega_after", step.omega_after}});
  }
  return nlohmann::json{{"blocks", std::move(blocks)},
                        {"feasible", trace.feasible},
                        {"merge_log", std::move(log)}};
}

inline nlohmann::json method_stats_to_json(const MethodStats& m) {
  return nlohmann::json{{"mean_hr_leakage", m.mean_hr_leakage},
                        {"std_hr_leakage", m.std_hr_leakage},
                        {"mean_overall_leakage", m.mean_overall_leakage},
                        {"std_overall_leakage", m.std_overall_leakage},
                        {"mean_nmil", m.mean_nmil},
                        {"std_nmil", m.std_nmil},
                        {"infeasible_count", m.infeasible_count}};
}

inline nlohmann::json sweep_to_json(const SweepResult& result) {
  nlohmann::json per_epsilon = nlohmann::json::array();
  for (const EpsilonStats& stats : result.per_epsilon) {
    per_epsilon.push_back(
        nlohmann::json{{"epsilon", stats.epsilon},
                       {"greedy", method_stats_to_json(stats.greedy)},
                       {"complete", method_stats_to_json(stats.complete)},
                       {"excluded_trials", stats.excluded_trials}});
  }
  return nlohmann::json{
      {"config",
       {{"num_trials", result.config.num_trials},
        {"num_secrets", result.config.num_secrets},
        {"num_symbols", result.config.num_symbols},
        {"epsilons", result.config.epsilons},
        {"seed", result.config.seed}}},
      {"per_epsilon", std::move(per_epsilon)}};
}

inline void write_json_file(const nlohmann::json& doc, const std::string& path) {
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace liftwatch
