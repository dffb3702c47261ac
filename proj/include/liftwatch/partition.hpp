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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "liftwatch/common.hpp"
#include "liftwatch/distribution.hpp"
#include "liftwatch/errors.hpp"
#include "liftwatch/lift.hpp"
#include "liftwatch/mechanism.hpp"

namespace liftwatch {

enum class MergeStepKind { kSeed, kGrow, kFixup };

/// One step of the agglomerative search. `symbols` lists the symbols added
/// to block `block` by this step (one symbol for seed/grow, a whole absorbed
/// block for fixup); `omega_after` is the grown block's leakage afterwards.
struct MergeStep {
  MergeStepKind kind = MergeStepKind::kSeed;
  std::size_t block = 0;
  std::vector<std::size_t> symbols;
  double omega_after = 0.0;
};

/// Result of the greedy refinement: the partition, whether every block meets
/// the epsilon constraint, and the full merge history.
struct GreedyTrace {
  HighRiskPartition partition;
  bool feasible = false;
  std::vector<MergeStep> merge_log;
};

struct GreedyOptions {
  /// Restrict fix-up merge candidates to blocks 2..p-1, excluding the first
  /// block. Off by default: the first block is a regular candidate.
  bool fixup_excludes_first_block = false;
};

namespace detail {

inline std::vector<std::size_t> sorted_union(std::vector<std::size_t> a,
                                             const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace detail

/// Greedy agglomerative refinement of the high-risk set.
///
/// Repeatedly seeds a block with the riskiest unassigned symbol and grows it
/// with the symbol minimizing the block's leakage until the block satisfies
/// epsilon or no symbols remain. If the last block still violates epsilon,
/// it absorbs whole earlier blocks, at each step the one minimizing the
/// merged leakage, until it is feasible or only one block remains. Ties in
/// argmax/argmin go to the lowest symbol or block index, so the trace is a
/// pure function of the input.
///
/// When even the final merge violates epsilon the result equals complete
/// merging and `feasible` is false; low-risk symbols are never pulled in.
inline GreedyTrace greedy_refine(const JointDistribution& j,
                                 const RiskSplit& split,
                                 const GreedyOptions& options = {}) {
  const LiftProfile profile = compute_lift_profile(j);
  const double epsilon = split.epsilon;

  std::vector<std::size_t> queue = split.high_risk;  // ascending
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<MergeStep> log;

  while (!queue.empty()) {
    std::size_t seed_pos = 0;
    for (std::size_t i = 1; i < queue.size(); ++i) {
      if (profile.omega[queue[i]] > profile.omega[queue[seed_pos]]) seed_pos = i;
    }
    const std::size_t seed = queue[seed_pos];
    queue.erase(queue.begin() + seed_pos);
    blocks.push_back({seed});
    double block_omega = profile.omega[seed];
    log.push_back({MergeStepKind::kSeed, blocks.size() - 1, {seed}, block_omega});

    while (block_omega > epsilon && !queue.empty()) {
      std::size_t best_pos = 0;
      double best_omega = kInfinity;
      bool have_best = false;
      for (std::size_t i = 0; i < queue.size(); ++i) {
        const double cand =
            subset_omega(j, detail::sorted_union(blocks.back(), {queue[i]}));
        if (!have_best || cand < best_omega) {
          have_best = true;
          best_pos = i;
          best_omega = cand;
        }
      }
      const std::size_t absorbed = queue[best_pos];
      queue.erase(queue.begin() + best_pos);
      blocks.back() = detail::sorted_union(blocks.back(), {absorbed});
      block_omega = best_omega;
      log.push_back(
          {MergeStepKind::kGrow, blocks.size() - 1, {absorbed}, block_omega});
    }
  }

  // Fix-up: only the last block can violate epsilon at this point.
  while (!blocks.empty() && subset_omega(j, blocks.back()) > epsilon &&
         blocks.size() > 1) {
    const std::size_t first = options.fixup_excludes_first_block ? 1 : 0;
    if (first >= blocks.size() - 1) break;  // no merge candidate left
    std::size_t best_idx = 0;
    double best_omega = kInfinity;
    bool have_best = false;
    for (std::size_t i = first; i + 1 < blocks.size(); ++i) {
      const double cand =
          subset_omega(j, detail::sorted_union(blocks.back(), blocks[i]));
      if (!have_best || cand < best_omega) {
        have_best = true;
        best_idx = i;
        best_omega = cand;
      }
    }
    std::vector<std::size_t> absorbed = blocks[best_idx];
    std::vector<std::size_t> merged =
        detail::sorted_union(blocks.back(), absorbed);
    blocks.pop_back();
    blocks.erase(blocks.begin() + best_idx);
    blocks.push_back(std::move(merged));
    log.push_back({MergeStepKind::kFixup, blocks.size() - 1, std::move(absorbed),
                   best_omega});
  }

  const bool feasible =
      blocks.empty() || subset_omega(j, blocks.back()) <= epsilon;
  return GreedyTrace{HighRiskPartition(split, std::move(blocks)), feasible,
                     std::move(log)};
}

/// Outcome of the exhaustive search: the best feasible partition by
/// utility, or nothing when no partition of the high-risk set meets
/// epsilon. `utility` is -infinity in the infeasible case.
struct OracleResult {
  std::optional<HighRiskPartition> partition;
  double utility = -kInfinity;

  bool feasible() const { return partition.has_value(); }
};

/// Enumerates every set partition of the high-risk set (restricted growth
/// strings) and returns a feasible partition maximizing I(X;Y). Ties go to
/// fewer blocks, then lexicographically smaller block lists. Bounded at
/// |high risk| <= 12.
inline OracleResult brute_force_optimal(const JointDistribution& j,
                                        const RiskSplit& split) {
  const std::vector<std::size_t>& ground = split.high_risk;
  const std::size_t n = ground.size();
  if (n > 12) {
    throw TooLargeError("high-risk set too large for oracle (" +
                        std::to_string(n) + " symbols, bound 12)");
  }
  if (n == 0) {
    HighRiskPartition empty(split, {});
    const double utility = mutual_information(j, empty);
    return OracleResult{std::move(empty), utility};
  }

  OracleResult best;
  std::vector<std::vector<std::size_t>> best_blocks;

  std::vector<std::size_t> rgs(n, 0);
  while (true) {
    std::size_t num_blocks = 0;
    for (std::size_t v : rgs) num_blocks = std::max(num_blocks, v + 1);
    std::vector<std::vector<std::size_t>> blocks(num_blocks);
    for (std::size_t i = 0; i < n; ++i) blocks[rgs[i]].push_back(ground[i]);

    bool feasible = true;
    for (const auto& block : blocks) {
      if (subset_omega(j, block) > split.epsilon) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      HighRiskPartition candidate(split, blocks);
      const double utility = mutual_information(j, candidate);
      const bool better =
          !best.partition.has_value() || utility > best.utility ||
          (utility == best.utility &&
           (blocks.size() < best_blocks.size() ||
            (blocks.size() == best_blocks.size() && blocks < best_blocks)));
      if (better) {
        best.partition = std::move(candidate);
        best.utility = utility;
        best_blocks = std::move(blocks);
      }
    }

    // Advance to the next restricted growth string.
    std::size_t i = n - 1;
    for (; i > 0; --i) {
      std::size_t prefix_max = 0;
      for (std::size_t k = 0; k < i; ++k) prefix_max = std::max(prefix_max, rgs[k]);
      if (rgs[i] <= prefix_max) {
        ++rgs[i];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
        break;
      }
    }
    if (i == 0) break;
  }
  return best;
}

/// True iff every block of `coarser` is a union of blocks of `finer`, and
/// the block masses match under that grouping (within 1e-12).
inline bool is_refinement(const JointDistribution& j,
                          const HighRiskPartition& finer,
                          const HighRiskPartition& coarser) {
  std::vector<std::size_t> ground_finer;
  for (const auto& block : finer.blocks()) {
    ground_finer.insert(ground_finer.end(), block.begin(), block.end());
  }
  std::vector<std::size_t> ground_coarser;
  for (const auto& block : coarser.blocks()) {
    ground_coarser.insert(ground_coarser.end(), block.begin(), block.end());
  }
  std::sort(ground_finer.begin(), ground_finer.end());
  std::sort(ground_coarser.begin(), ground_coarser.end());
  if (ground_finer != ground_coarser) {
    throw CoverMismatchError("partitions cover different high-risk sets");
  }

  const std::size_t num_symbols = j.num_symbols();
  std::vector<std::size_t> finer_id(num_symbols, num_symbols);
  for (std::size_t b = 0; b < finer.blocks().size(); ++b) {
    for (std::size_t x : finer.blocks()[b]) finer_id[x] = b;
  }

  const Marginals& m = j.marginals();
  for (const auto& coarse_block : coarser.blocks()) {
    std::vector<bool> member(num_symbols, false);
    for (std::size_t x : coarse_block) member[x] = true;

    std::vector<std::size_t> used_finer;
    for (std::size_t x : coarse_block) used_finer.push_back(finer_id[x]);
    std::sort(used_finer.begin(), used_finer.end());
    used_finer.erase(std::unique(used_finer.begin(), used_finer.end()),
                     used_finer.end());

    double grouped_mass = 0.0;
    for (std::size_t fb : used_finer) {
      for (std::size_t x : finer.blocks()[fb]) {
        if (!member[x]) return false;  // finer block straddles the boundary
        grouped_mass += m.px[x];
      }
    }
    double coarse_mass = 0.0;
    for (std::size_t x : coarse_block) coarse_mass += m.px[x];
    if (std::abs(coarse_mass - grouped_mass) > 1e-12) return false;
  }
  return true;
}

}  // namespace liftwatch
