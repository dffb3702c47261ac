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
#include <string>
#include <vector>

#include "liftwatch/common.hpp"
#include "liftwatch/distribution.hpp"
#include "liftwatch/errors.hpp"

namespace liftwatch {

/// Per-symbol log-lift leakage of a joint distribution.
///
/// log_lift(s,x) = ln p(s,x) - ln p(s) - ln p(x), with -infinity for zero
/// cells. omega(x) = max_s |log_lift(s,x)| is the symbol's worst-case
/// leakage; a zero cell makes it +infinity.
struct LiftProfile {
  std::size_t num_secrets = 0;
  std::size_t num_symbols = 0;
  std::vector<double> log_lift;  // row-major |S| x |X|
  std::vector<double> omega;     // length |X|

  double lift_at(std::size_t s, std::size_t x) const {
    return log_lift[s * num_symbols + x];
  }
};

/// The bipartition of the alphabet at leakage threshold epsilon.
/// Symbols with omega(x) <= epsilon are low risk; the rest are high risk.
/// Both index lists keep the alphabet order.
struct RiskSplit {
  double epsilon = 0.0;
  std::vector<std::size_t> low_risk;
  std::vector<std::size_t> high_risk;
};

inline LiftProfile compute_lift_profile(const JointDistribution& j) {
  const Marginals& m = j.marginals();
  LiftProfile profile;
  profile.num_secrets = j.num_secrets();
  profile.num_symbols = j.num_symbols();
  profile.log_lift.resize(j.num_secrets() * j.num_symbols());
  profile.omega.assign(j.num_symbols(), 0.0);
  for (std::size_t s = 0; s < j.num_secrets(); ++s) {
    for (std::size_t x = 0; x < j.num_symbols(); ++x) {
      const double cell = j.mass(s, x);
      const double value =
          cell > 0.0 ? std::log(cell) - std::log(m.ps[s]) - std::log(m.px[x])
                     : -kInfinity;
      profile.log_lift[s * j.num_symbols() + x] = value;
      profile.omega[x] = std::max(profile.omega[x], std::abs(value));
    }
  }
  return profile;
}

/// Worst-case log-lift leakage of a subset of symbols:
/// max_s |ln(p(Q|s)/p(Q))|. +infinity iff p(Q|s) = 0 for some s.
/// The whole alphabet has p(Q|s) = p(Q) = 1 identically, hence exactly 0.
inline double subset_omega(const JointDistribution& j,
                           std::vector<std::size_t> subset) {
  if (subset.empty()) {
    throw EmptySubsetError("subset leakage query on an empty subset");
  }
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  if (subset.back() >= j.num_symbols()) {
    throw Error("subset index " + std::to_string(subset.back()) +
                " out of range");
  }
  if (subset.size() == j.num_symbols()) return 0.0;

  const Marginals& m = j.marginals();
  double p_subset = 0.0;
  for (std::size_t x : subset) p_subset += m.px[x];

  double worst = 0.0;
  for (std::size_t s = 0; s < j.num_secrets(); ++s) {
    double joint_mass = 0.0;
    for (std::size_t x : subset) joint_mass += j.mass(s, x);
    const double value =
        joint_mass > 0.0
            ? std::log(joint_mass) - std::log(m.ps[s]) - std::log(p_subset)
            : -kInfinity;
    worst = std::max(worst, std::abs(value));
  }
  return worst;
}

/// Splits the alphabet at epsilon by exact comparison omega(x) <= epsilon.
/// A symbol sitting exactly on the threshold is low risk.
inline RiskSplit risk_split(const LiftProfile& profile, double epsilon) {
  RiskSplit split;
  split.epsilon = epsilon;
  for (std::size_t x = 0; x < profile.num_symbols; ++x) {
    if (profile.omega[x] <= epsilon) {
      split.low_risk.push_back(x);
    } else {
      split.high_risk.push_back(x);
    }
  }
  return split;
}

}  // namespace liftwatch
