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

#include "liftwatch/mechanism.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "liftwatch/common.hpp"
#include "liftwatch/distribution.hpp"
#include "liftwatch/errors.hpp"
#include "liftwatch/lift.hpp"
#include "liftwatch/partition.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

namespace {

using liftwatch::HighRiskPartition;
using liftwatch::JointDistribution;
using liftwatch::kInfinity;
using liftwatch::RiskSplit;
using liftwatch::SanitizationChannel;
using liftwatch_test::kDemoEntropy;
using liftwatch_test::kDemoNmil;
using liftwatch_test::kDemoUtility;

HighRiskPartition demo_partition() {
  const RiskSplit split = liftwatch_test::split_at(liftwatch_test::demo_joint(), 0.5);
  return HighRiskPartition(split, {{0, 2}});
}

TEST(HighRiskPartitionCtor, SortsBlockMembers) {
  const RiskSplit split = liftwatch_test::split_at(liftwatch_test::demo_joint(), 0.5);
  const HighRiskPartition part(split, {{2, 0}});
  EXPECT_EQ(part.blocks()[0], (std::vector<std::size_t>{0, 2}));
}

TEST(HighRiskPartitionCtor, RejectsBadCovers) {
  const JointDistribution j = liftwatch_test::demo_joint();
  const RiskSplit split = liftwatch_test::split_at(j, 0.5);  // high = {0, 2}
  EXPECT_THROW(HighRiskPartition(split, {{0}}), liftwatch::PartitionMismatchError);
  EXPECT_THROW(HighRiskPartition(split, {{0, 1, 2}}),
               liftwatch::PartitionMismatchError);
  EXPECT_THROW(HighRiskPartition(split, {{0, 2}, {0}}),
               liftwatch::PartitionMismatchError);
  EXPECT_THROW(HighRiskPartition(split, {{0, 2}, {}}),
               liftwatch::PartitionMismatchError);
}

TEST(CompleteMerging, SingleBlockOverHighRisk) {
  const RiskSplit split = liftwatch_test::split_at(liftwatch_test::demo_joint(), 0.5);
  const HighRiskPartition part = liftwatch::complete_merging(split);
  ASSERT_EQ(part.blocks().size(), 1u);
  EXPECT_EQ(part.blocks()[0], (std::vector<std::size_t>{0, 2}));
}

TEST(CompleteMerging, EmptyHighRiskHasNoBlocks) {
  const RiskSplit split = liftwatch_test::split_at(liftwatch_test::demo_joint(), 2.0);
  EXPECT_TRUE(liftwatch::complete_merging(split).blocks().empty());
}

TEST(BuildChannel, HandExampleLayout) {
  const JointDistribution j = liftwatch_test::demo_joint();
  const SanitizationChannel ch = liftwatch::build_channel(j, demo_partition());
  ASSERT_EQ(ch.num_outputs(), 2u);
  EXPECT_EQ(ch.num_kept, 1u);
  // Low-risk symbols first (x2 kept), then the merged block {x1,x3}
  // represented by its minimum member.
  EXPECT_EQ(ch.output_sources[0], (std::vector<std::size_t>{1}));
  EXPECT_EQ(ch.output_sources[1], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(ch.representative(1), 0u);
  EXPECT_NEAR(ch.output_px[0], 0.3, 1e-12);
  EXPECT_NEAR(ch.output_px[1], 0.7, 1e-12);
  // Deterministic rows: x1 and x3 map to the super-symbol, x2 to itself.
  EXPECT_DOUBLE_EQ(ch.transition_at(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(ch.transition_at(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(ch.transition_at(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(ch.transition_at(2, 1), 1.0);
  EXPECT_NEAR(ch.joint_at(0, 1), 0.35, 1e-12);
  EXPECT_NEAR(ch.joint_at(1, 1), 0.35, 1e-12);
}

TEST(BuildChannel, RowsAreStochastic) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const JointDistribution j = liftwatch::sample_random_joint(4, 10, seed);
    const RiskSplit split = liftwatch_test::split_at(j, 0.6);
    const liftwatch::GreedyTrace trace = liftwatch::greedy_refine(j, split);
    const SanitizationChannel ch = liftwatch::build_channel(j, trace.partition);
    for (std::size_t x = 0; x < ch.num_inputs; ++x) {
      double row = 0.0;
      for (std::size_t y = 0; y < ch.num_outputs(); ++y) {
        row += ch.transition_at(x, y);
      }
      EXPECT_NEAR(row, 1.0, 1e-12);
    }
    double total = 0.0;
    for (double p : ch.output_px) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(BuildChannel, EmptyHighRiskGivesIdentity) {
  const JointDistribution j = liftwatch_test::demo_joint();
  const RiskSplit split = liftwatch_test::split_at(j, 2.0);
  const SanitizationChannel ch =
      liftwatch::build_channel(j, liftwatch::complete_merging(split));
  ASSERT_EQ(ch.num_outputs(), 3u);
  for (std::size_t x = 0; x < 3; ++x) {
    EXPECT_DOUBLE_EQ(ch.transition_at(x, x), 1.0);
    EXPECT_NEAR(ch.output_px[x], j.marginals().px[x], 1e-12);
  }
}

TEST(BuildChannel, TotalMergeCollapsesToOneOutput) {
  // Both symbols carry omega = ln 2.5, so an epsilon below that merges the
  // whole alphabet. (The 2x3 demo joint cannot do this: its middle symbol
  // has omega = 0 and stays low-risk at every positive epsilon.)
  const JointDistribution j({{0.4, 0.1}, {0.1, 0.4}});
  const RiskSplit split = liftwatch_test::split_at(j, 0.5);
  ASSERT_EQ(split.high_risk.size(), 2u);
  const HighRiskPartition part = liftwatch::complete_merging(split);
  const SanitizationChannel ch = liftwatch::build_channel(j, part);
  ASSERT_EQ(ch.num_outputs(), 1u);
  EXPECT_NEAR(ch.output_px[0], 1.0, 1e-12);
  EXPECT_EQ(liftwatch::post_leakage(ch), 0.0);
  EXPECT_NEAR(liftwatch::mutual_information(j, part), 0.0, 1e-12);
  EXPECT_NEAR(liftwatch::nmil(j, part), 1.0, 1e-12);
}

TEST(PostLeakage, HandExampleIsZero) {
  const SanitizationChannel ch =
      liftwatch::build_channel(liftwatch_test::demo_joint(), demo_partition());
  EXPECT_NEAR(liftwatch::post_leakage(ch), 0.0, 1e-12);
  EXPECT_NEAR(liftwatch::merged_leakage(ch), 0.0, 1e-12);
}

TEST(PostLeakage, IdentityChannelKeepsProfileMaximum) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const JointDistribution j = liftwatch::sample_random_joint(3, 6, seed);
    const liftwatch::LiftProfile profile = liftwatch::compute_lift_profile(j);
    const RiskSplit split = liftwatch::risk_split(profile, kInfinity);
    const SanitizationChannel ch =
        liftwatch::build_channel(j, liftwatch::complete_merging(split));
    double worst = 0.0;
    for (double w : profile.omega) worst = std::max(worst, w);
    EXPECT_NEAR(liftwatch::post_leakage(ch), worst, 1e-12);
    EXPECT_TRUE(std::isnan(liftwatch::merged_leakage(ch)));
  }
}

TEST(PostLeakage, MatchesSubsetOmegaDecomposition) {
  // Cross-module identity: the channel-side maximum equals the max over
  // kept-symbol omegas and per-block subset omegas.
  std::mt19937_64 rng(2024);
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const JointDistribution j = liftwatch::sample_random_joint(4, 9, seed);
    const liftwatch::LiftProfile profile = liftwatch::compute_lift_profile(j);
    std::uniform_real_distribution<double> pick_eps(0.1, 1.2);
    const RiskSplit split = liftwatch::risk_split(profile, pick_eps(rng));
    const auto blocks = liftwatch_test::random_partition(split.high_risk, rng);
    if (split.high_risk.empty()) continue;
    const HighRiskPartition part(split, blocks);
    const SanitizationChannel ch = liftwatch::build_channel(j, part);
    double expected = 0.0;
    for (std::size_t x : split.low_risk) {
      expected = std::max(expected, profile.omega[x]);
    }
    for (const auto& block : part.blocks()) {
      expected = std::max(expected, liftwatch::subset_omega(j, block));
    }
    if (ch.num_outputs() == 1) expected = 0.0;
    const double actual = liftwatch::post_leakage(ch);
    if (expected == kInfinity) {
      EXPECT_EQ(actual, kInfinity);
    } else {
      EXPECT_NEAR(actual, expected, 1e-10);
    }
  }
}

TEST(MutualInformation, HandExampleClosedForm) {
  EXPECT_NEAR(
      liftwatch::mutual_information(liftwatch_test::demo_joint(), demo_partition()),
      kDemoUtility, 1e-12);
}

TEST(MutualInformation, IdentityEqualsEntropy) {
  const JointDistribution j = liftwatch_test::demo_joint();
  const RiskSplit split = liftwatch_test::split_at(j, 2.0);
  EXPECT_NEAR(
      liftwatch::mutual_information(j, liftwatch::complete_merging(split)),
      kDemoEntropy, 1e-12);
}

TEST(MutualInformation, ClosedFormMatchesDirectSum) {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> pick_eps(0.1, 1.5);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const JointDistribution j =
        liftwatch::sample_random_joint(2 + seed % 4, 4 + seed % 7, seed);
    const RiskSplit split = liftwatch_test::split_at(j, pick_eps(rng));
    const auto blocks = liftwatch_test::random_partition(split.high_risk, rng);
    const HighRiskPartition part(split, blocks);
    const SanitizationChannel ch = liftwatch::build_channel(j, part);
    EXPECT_NEAR(liftwatch::mutual_information(j, part),
                liftwatch_test::direct_mutual_information(j, ch), 1e-10);
  }
}

TEST(Nmil, HandExample) {
  EXPECT_NEAR(liftwatch::nmil(liftwatch_test::demo_joint(), demo_partition()),
              kDemoNmil, 1e-12);
}

TEST(Nmil, IdentityIsZero) {
  const JointDistribution j = liftwatch_test::demo_joint();
  const RiskSplit split = liftwatch_test::split_at(j, 2.0);
  EXPECT_NEAR(liftwatch::nmil(j, liftwatch::complete_merging(split)), 0.0,
              1e-12);
}

TEST(Nmil, AlwaysWithinUnitInterval) {
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> pick_eps(0.05, 1.5);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const JointDistribution j = liftwatch::sample_random_joint(3, 8, seed);
    const RiskSplit split = liftwatch_test::split_at(j, pick_eps(rng));
    const auto blocks = liftwatch_test::random_partition(split.high_risk, rng);
    const double value =
        liftwatch::nmil(j, HighRiskPartition(split, blocks));
    EXPECT_GE(value, 0.0);
    EXPECT_LE(value, 1.0);
  }
}

TEST(Nmil, RejectsZeroEntropyAlphabet) {
  const JointDistribution j = liftwatch::validate({{0.6}, {0.4}});
  const RiskSplit split = liftwatch_test::split_at(j, 1.0);
  EXPECT_THROW(liftwatch::nmil(j, liftwatch::complete_merging(split)),
               liftwatch::ZeroEntropyError);
}

TEST(Nmil, RefinementNeverLosesUtility) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> pick_eps(0.05, 1.0);
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 60 && checked < 30; ++seed) {
    const JointDistribution j = liftwatch::sample_random_joint(3, 9, seed);
    const RiskSplit split = liftwatch_test::split_at(j, pick_eps(rng));
    if (split.high_risk.size() < 2) continue;
    const auto finer_blocks = liftwatch_test::random_partition(split.high_risk, rng);
    const auto coarser_blocks = liftwatch_test::random_coarsening(finer_blocks, rng);
    const HighRiskPartition finer(split, finer_blocks);
    const HighRiskPartition coarser(split, coarser_blocks);
    EXPECT_TRUE(liftwatch::is_refinement(j, finer, coarser));
    EXPECT_LE(liftwatch::nmil(j, finer), liftwatch::nmil(j, coarser) + 1e-12);
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

TEST(UniformRandomizer, LeakageAndUtilityMatchDeterministicMerge) {
  // Merging onto one representative or spreading uniformly over the block
  // must give the same utility and the same worst-case output leakage.
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> pick_eps(0.1, 1.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const JointDistribution j = liftwatch::sample_random_joint(3, 7, seed);
    const RiskSplit split = liftwatch_test::split_at(j, pick_eps(rng));
    if (split.high_risk.empty()) continue;
    const auto blocks = liftwatch_test::random_partition(split.high_risk, rng);
    const HighRiskPartition part(split, blocks);
    const SanitizationChannel merged = liftwatch::build_channel(j, part);
    const liftwatch_test::DenseChannel uniform =
        liftwatch_test::uniform_block_channel(j, part);
    EXPECT_NEAR(liftwatch_test::dense_mutual_information(j, uniform),
                liftwatch::mutual_information(j, part), 1e-10);
    const double merged_leak = liftwatch::post_leakage(merged);
    const double uniform_leak = liftwatch_test::dense_max_leakage(j, uniform);
    if (merged_leak == kInfinity || uniform_leak == kInfinity) {
      EXPECT_EQ(merged_leak, uniform_leak);
    } else {
      EXPECT_NEAR(uniform_leak, merged_leak, 1e-10);
    }
  }
}

}  // namespace
