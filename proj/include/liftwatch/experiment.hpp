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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "liftwatch/common.hpp"
#include "liftwatch/distribution.hpp"
#include "liftwatch/errors.hpp"
#include "liftwatch/lift.hpp"
#include "liftwatch/mechanism.hpp"
#include "liftwatch/partition.hpp"

namespace liftwatch {

/// Parameters of a Monte Carlo sweep over epsilon.
struct SweepConfig {
  std::size_t num_trials;
  std::size_t num_secrets;
  std::size_t num_symbols;
  std::vector<double> epsilons;
  std::uint64_t seed;

  SweepConfig(std::size_t trials, std::size_t secrets, std::size_t symbols,
              std::vector<double> eps, std::uint64_t rng_seed)
      : num_trials(trials),
        num_secrets(secrets),
        num_symbols(symbols),
        epsilons(std::move(eps)),
        seed(rng_seed) {
    if (num_trials < 1 || num_secrets < 1 || num_symbols < 1) {
      throw Error("sweep sizes must be at least 1");
    }
    if (epsilons.empty()) {
      throw Error("sweep requires at least one epsilon");
    }
    double prev = 0.0;
    for (double e : epsilons) {
      if (!(e > prev)) {
        throw Error("epsilons must be positive and strictly increasing");
      }
      prev = e;
    }
  }
};

/// Per-trial metrics of one sanitization method at one epsilon.
struct MethodOutcome {
  double hr_leakage = 0.0;  // max omega over merged outputs; NaN if none
  double overall_leakage = 0.0;
  double nmil = 0.0;
  bool feasible = true;
};

struct TrialEpsilonOutcome {
  bool high_risk_empty = true;
  MethodOutcome greedy;
  MethodOutcome complete;
};

/// Aggregated statistics of one method at one epsilon. Standard deviations
/// are population deviations (divide by N). Means over an empty selection
/// are NaN.
struct MethodStats {
  double mean_hr_leakage = 0.0;
  double std_hr_leakage = 0.0;
  double mean_overall_leakage = 0.0;
  double std_overall_leakage = 0.0;
  double mean_nmil = 0.0;
  double std_nmil = 0.0;
  std::size_t infeasible_count = 0;
};

struct EpsilonStats {
  double epsilon = 0.0;
  MethodStats greedy;
  MethodStats complete;
  /// Trials with an empty high-risk set; they contribute NMIL = 0 and are
  /// left out of the high-risk leakage statistics.
  std::size_t excluded_trials = 0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<EpsilonStats> per_epsilon;
};

/// Evaluates both methods on one joint at one epsilon.
inline TrialEpsilonOutcome evaluate_trial_at(const JointDistribution& j,
                                             const LiftProfile& profile,
                                             double epsilon) {
  const RiskSplit split = risk_split(profile, epsilon);
  TrialEpsilonOutcome out;
  out.high_risk_empty = split.high_risk.empty();

  const GreedyTrace trace = greedy_refine(j, split);
  const SanitizationChannel greedy_ch = build_channel(j, trace.partition);
  out.greedy.hr_leakage = merged_leakage(greedy_ch);
  out.greedy.overall_leakage = post_leakage(greedy_ch);
  out.greedy.nmil = out.high_risk_empty ? 0.0 : nmil(j, trace.partition);
  out.greedy.feasible = trace.feasible;

  const HighRiskPartition baseline = complete_merging(split);
  const SanitizationChannel complete_ch = build_channel(j, baseline);
  out.complete.hr_leakage = merged_leakage(complete_ch);
  out.complete.overall_leakage = post_leakage(complete_ch);
  out.complete.nmil = out.high_risk_empty ? 0.0 : nmil(j, baseline);
  out.complete.feasible =
      out.high_risk_empty || subset_omega(j, split.high_risk) <= epsilon;
  return out;
}

namespace detail {

struct MeanStd {
  double mean;
  double stddev;
};

inline MeanStd population_stats(const std::vector<double>& values) {
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double var = sq / static_cast<double>(values.size());
  return {mean, std::sqrt(var < 0.0 ? 0.0 : var)};
}

}  // namespace detail

/// Runs the full sweep: num_trials seeded joints, each evaluated at every
/// epsilon with the greedy refinement and the complete-merging baseline.
///
/// Trial t uses child_seed(config.seed, t), so the sweep is reproducible
/// trial by trial. Trials run on up to max_threads workers (0 = all
/// hardware threads); aggregation walks trials in index order, so the
/// result does not depend on the thread count.
inline SweepResult run_sweep(const SweepConfig& config,
                             std::size_t max_threads = 0) {
  const std::size_t num_eps = config.epsilons.size();
  std::vector<TrialEpsilonOutcome> grid(config.num_trials * num_eps);

  const auto run_trial = [&](std::size_t t) {
    const JointDistribution j = sample_random_joint(
        config.num_secrets, config.num_symbols, child_seed(config.seed, t));
    const LiftProfile profile = compute_lift_profile(j);
    for (std::size_t e = 0; e < num_eps; ++e) {
      grid[t * num_eps + e] = evaluate_trial_at(j, profile, config.epsilons[e]);
    }
  };

  std::size_t workers = max_threads;
  if (workers == 0) {
    workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  workers = std::min(workers, config.num_trials);
  if (workers <= 1) {
    for (std::size_t t = 0; t < config.num_trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < config.num_trials; t += workers) {
          run_trial(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  SweepResult result{config, {}};
  result.per_epsilon.reserve(num_eps);
  for (std::size_t e = 0; e < num_eps; ++e) {
    EpsilonStats stats;
    stats.epsilon = config.epsilons[e];

    std::vector<double> hr_g, hr_c, ov_g, ov_c, nm_g, nm_c;
    for (std::size_t t = 0; t < config.num_trials; ++t) {
      const TrialEpsilonOutcome& out = grid[t * num_eps + e];
      if (out.high_risk_empty) {
        ++stats.excluded_trials;
      } else {
        hr_g.push_back(out.greedy.hr_leakage);
        hr_c.push_back(out.complete.hr_leakage);
      }
      ov_g.push_back(out.greedy.overall_leakage);
      ov_c.push_back(out.complete.overall_leakage);
      nm_g.push_back(out.greedy.nmil);
      nm_c.push_back(out.complete.nmil);
      if (!out.greedy.feasible) ++stats.greedy.infeasible_count;
      if (!out.complete.feasible) ++stats.complete.infeasible_count;
    }

    const auto fill = [](MethodStats& m, const std::vector<double>& hr,
                         const std::vector<double>& ov,
                         const std::vector<double>& nm) {
      const auto hr_stats = detail::population_stats(hr);
      const auto ov_stats = detail::population_stats(ov);
      const auto nm_stats = detail::population_stats(nm);
      m.mean_hr_leakage = hr_stats.mean;
      m.std_hr_leakage = hr_stats.stddev;
      m.mean_overall_leakage = ov_stats.mean;
      m.std_overall_leakage = ov_stats.stddev;
      m.mean_nmil = nm_stats.mean;
      m.std_nmil = nm_stats.stddev;
    };
    fill(stats.greedy, hr_g, ov_g, nm_g);
    fill(stats.complete, hr_c, ov_c, nm_c);
    result.per_epsilon.push_back(std::move(stats));
  }
  return result;
}

/// Writes the sweep as CSV: one row per (epsilon, method), preceded by a
/// comment line recording the generator and the deviation convention.
inline void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");

  out << "# trials=" << result.config.num_trials
      << " secrets=" << result.config.num_secrets
      << " symbols=" << result.config.num_symbols
      << " seed=" << result.config.seed
      << "; sampler=flat-Dirichlet(mt19937_64, inverse-CDF exponential),"
      << " trial seed=splitmix64 mix of (seed, trial);"
      << " std=population (divide by N)\n";
  out << "epsilon,method,mean_hr_leakage,std_hr_leakage,mean_overall_leakage,"
         "std_overall_leakage,mean_nmil,std_nmil,infeasible_count,"
         "excluded_trials\n";
  for (const EpsilonStats& stats : result.per_epsilon) {
    const auto row = [&](const char* method, const MethodStats& m) {
      out << format_real(stats.epsilon) << ',' << method << ','
          << format_real(m.mean_hr_leakage) << ','
          << format_real(m.std_hr_leakage) << ','
          << format_real(m.mean_overall_leakage) << ','
          << format_real(m.std_overall_leakage) << ','
          << format_real(m.mean_nmil) << ',' << format_real(m.std_nmil) << ','
          << m.infeasible_count << ',' << stats.excluded_trials << '\n';
    };
    row("greedy", stats.greedy);
    row("complete", stats.complete);
  }
  if (!out) throw IoError("failed while writing " + path);
}

}  // namespace liftwatch
