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
#include <utility>
#include <vector>

#include "liftwatch/common.hpp"
#include "liftwatch/distribution.hpp"
#include "liftwatch/errors.hpp"
#include "liftwatch/lift.hpp"

namespace liftwatch {

/// An ordered partition of the high-risk set into disjoint nonempty blocks.
/// Block members are kept sorted; block order is meaningful (it records the
/// order blocks were formed and fixes the output alphabet order).
class HighRiskPartition {
 public:
  HighRiskPartition(RiskSplit split, std::vector<std::vector<std::size_t>> blocks)
      : split_(std::move(split)), blocks_(std::move(blocks)) {
    std::vector<std::size_t> covered;
    for (auto& block : blocks_) {
      if (block.empty()) {
        throw PartitionMismatchError("partition contains an empty block");
      }
      std::sort(block.begin(), block.end());
      covered.insert(covered.end(), block.begin(), block.end());
    }
    std::sort(covered.begin(), covered.end());
    if (std::adjacent_find(covered.begin(), covered.end()) != covered.end()) {
      throw PartitionMismatchError("partition blocks overlap");
    }
    if (covered != split_.high_risk) {
      throw PartitionMismatchError(
          "partition blocks do not cover the high-risk set exactly");
    }
  }

  const RiskSplit& split() const { return split_; }
  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }

 private:
  RiskSplit split_;
  std::vector<std::vector<std::size_t>> blocks_;
};

/// The baseline partition: all high-risk symbols in one block
/// (no block at all when the high-risk set is empty).
inline HighRiskPartition complete_merging(const RiskSplit& split) {
  std::vector<std::vector<std::size_t>> blocks;
  if (!split.high_risk.empty()) blocks.push_back(split.high_risk);
  return HighRiskPartition(split, std::move(blocks));
}

/// Merging channel p(y|x) induced by a high-risk partition.
///
/// Output alphabet: the low-risk symbols kept verbatim (in alphabet order),
/// then one super-symbol per block (in block order). Each block merges
/// deterministically onto its minimum-index member; utility and leakage do
/// not depend on that choice.
struct SanitizationChannel {
  std::size_t num_inputs = 0;
  std::size_t num_secrets = 0;
  std::size_t num_kept = 0;  // outputs [0, num_kept) are kept symbols
  std::vector<std::vector<std::size_t>> output_sources;  // input symbols per output
  std::vector<double> transition;    // row-major |X| x |Y|, rows sum to 1
  std::vector<double> output_px;     // p(y)
  std::vector<double> output_joint;  // row-major |S| x |Y|, p(s,y)

  std::size_t num_outputs() const { return output_sources.size(); }

  double transition_at(std::size_t x, std::size_t y) const {
    return transition[x * num_outputs() + y];
  }
  double joint_at(std::size_t s, std::size_t y) const {
    return output_joint[s * num_outputs() + y];
  }
  /// Representative input symbol of an output (the block minimum).
  std::size_t representative(std::size_t y) const {
    return output_sources[y].front();
  }
};

inline SanitizationChannel build_channel(const JointDistribution& j,
                                         const HighRiskPartition& part) {
  const RiskSplit& split = part.split();
  if (split.low_risk.size() + split.high_risk.size() != j.num_symbols()) {
    throw PartitionMismatchError("risk split does not cover the alphabet");
  }

  SanitizationChannel ch;
  ch.num_inputs = j.num_symbols();
  ch.num_secrets = j.num_secrets();
  ch.num_kept = split.low_risk.size();
  for (std::size_t x : split.low_risk) {
    if (x >= j.num_symbols()) {
      throw PartitionMismatchError("symbol index out of range");
    }
    ch.output_sources.push_back({x});
  }
  for (const auto& block : part.blocks()) {
    if (block.back() >= j.num_symbols()) {
      throw PartitionMismatchError("symbol index out of range");
    }
    ch.output_sources.push_back(block);
  }

  const std::size_t ny = ch.num_outputs();
  ch.transition.assign(j.num_symbols() * ny, 0.0);
  ch.output_px.assign(ny, 0.0);
  ch.output_joint.assign(j.num_secrets() * ny, 0.0);
  const Marginals& m = j.marginals();
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x : ch.output_sources[y]) {
      ch.transition[x * ny + y] = 1.0;
      ch.output_px[y] += m.px[x];
      for (std::size_t s = 0; s < j.num_secrets(); ++s) {
        ch.output_joint[s * ny + y] += j.mass(s, x);
      }
    }
  }
  return ch;
}

/// Worst-case log-lift of a single channel output, max_s |ln(p(y|s)/p(y))|,
/// computed from the output-side joint. A one-symbol output alphabet carries
/// no information, so its leakage is exactly 0.
inline double output_omega(const SanitizationChannel& ch, std::size_t y) {
  const std::size_t ny = ch.num_outputs();
  if (ny == 1) return 0.0;
  double worst = 0.0;
  for (std::size_t s = 0; s < ch.num_secrets; ++s) {
    double ps = 0.0;
    for (std::size_t yy = 0; yy < ny; ++yy) ps += ch.output_joint[s * ny + yy];
    const double cell = ch.output_joint[s * ny + y];
    const double value =
        cell > 0.0 ? std::log(cell) - std::log(ps) - std::log(ch.output_px[y])
                   : -kInfinity;
    worst = std::max(worst, std::abs(value));
  }
  return worst;
}

/// Post-randomization leakage max_y omega(y) over the whole output alphabet.
inline double post_leakage(const SanitizationChannel& ch) {
  double worst = 0.0;
  for (std::size_t y = 0; y < ch.num_outputs(); ++y) {
    worst = std::max(worst, output_omega(ch, y));
  }
  return worst;
}

/// Leakage restricted to the merged (super-symbol) outputs. NaN when the
/// partition has no blocks, i.e. no merged output exists.
inline double merged_leakage(const SanitizationChannel& ch) {
  if (ch.num_kept == ch.num_outputs()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double worst = 0.0;
  for (std::size_t y = ch.num_kept; y < ch.num_outputs(); ++y) {
    worst = std::max(worst, output_omega(ch, y));
  }
  return worst;
}

/// Mutual information I(X;Y) of the merging channel, in nats, via the
/// closed form H(X) + sum_i sum_{x in X_i} p(x) ln(p(x)/p(X_i)).
/// Kept symbols pass through unchanged and contribute no loss.
inline double mutual_information(const JointDistribution& j,
                                 const HighRiskPartition& part) {
  const Marginals& m = j.marginals();
  double value = entropy_x(j);
  for (const auto& block : part.blocks()) {
    double block_mass = 0.0;
    for (std::size_t x : block) block_mass += m.px[x];
    for (std::size_t x : block) {
      value += m.px[x] * std::log(m.px[x] / block_mass);
    }
  }
  return value;
}

/// Normalized mutual information loss (H(X) - I(X;Y)) / H(X), clamped to
/// [0,1]. 0 means lossless, 1 means total loss.
inline double nmil(const JointDistribution& j, const HighRiskPartition& part) {
  const double h = entropy_x(j);
  if (!(h > 0.0)) {
    throw ZeroEntropyError("H(X) = 0; normalized loss undefined");
  }
  const double value = (h - mutual_information(j, part)) / h;
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace liftwatch
