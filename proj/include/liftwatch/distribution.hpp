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
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "liftwatch/common.hpp"
#include "liftwatch/errors.hpp"

namespace liftwatch {

/// Marginal distributions p(x) and p(s) of a joint table.
struct Marginals {
  std::vector<double> px;
  std::vector<double> ps;
};

/// A validated joint distribution p(s,x) over |S| secrets and |X| symbols.
///
/// Construction normalizes the table to total mass 1 and rejects tables with
/// negative entries, total mass off by more than 1e-6, or a secret/symbol
/// whose marginal mass is zero. Zero individual cells are allowed. Instances
/// are immutable and safe to share across threads.
class JointDistribution {
 public:
  explicit JointDistribution(const std::vector<std::vector<double>>& raw_table) {
    if (raw_table.empty() || raw_table.front().empty()) {
      throw Error("joint table must be nonempty");
    }
    num_secrets_ = raw_table.size();
    num_symbols_ = raw_table.front().size();
    mass_.reserve(num_secrets_ * num_symbols_);
    double total = 0.0;
    for (std::size_t s = 0; s < num_secrets_; ++s) {
      const auto& row = raw_table[s];
      if (row.size() != num_symbols_) {
        throw Error("joint table must be rectangular");
      }
      for (double cell : row) {
        if (!(cell >= 0.0)) {
          throw NegativeEntryError("joint table entry is negative (row " +
                                   std::to_string(s + 1) + ")");
        }
        total += cell;
        mass_.push_back(cell);
      }
    }
    if (std::abs(total - 1.0) > 1e-6) {
      throw MassNotNormalizableError("total mass " + format_real(total) +
                                     " deviates from 1 by more than 1e-6");
    }
    for (double& cell : mass_) cell /= total;

    marginals_.px.assign(num_symbols_, 0.0);
    marginals_.ps.assign(num_secrets_, 0.0);
    for (std::size_t s = 0; s < num_secrets_; ++s) {
      for (std::size_t x = 0; x < num_symbols_; ++x) {
        const double cell = mass_[s * num_symbols_ + x];
        marginals_.px[x] += cell;
        marginals_.ps[s] += cell;
      }
    }
    for (std::size_t x = 0; x < num_symbols_; ++x) {
      if (marginals_.px[x] <= 0.0) {
        throw DeadSymbolError("symbol x" + std::to_string(x + 1) +
                              " has zero marginal mass");
      }
    }
    for (std::size_t s = 0; s < num_secrets_; ++s) {
      if (marginals_.ps[s] <= 0.0) {
        throw DeadSymbolError("secret s" + std::to_string(s + 1) +
                              " has zero marginal mass");
      }
    }
  }

  std::size_t num_secrets() const { return num_secrets_; }
  std::size_t num_symbols() const { return num_symbols_; }

  /// p(s,x); row-major indexing.
  double mass(std::size_t s, std::size_t x) const {
    return mass_[s * num_symbols_ + x];
  }

  const std::vector<double>& flat() const { return mass_; }
  const Marginals& marginals() const { return marginals_; }

 private:
  std::size_t num_secrets_ = 0;
  std::size_t num_symbols_ = 0;
  std::vector<double> mass_;
  Marginals marginals_;
};

/// Validates a raw nonnegative table and returns the normalized joint.
inline JointDistribution validate(const std::vector<std::vector<double>>& raw_table) {
  return JointDistribution(raw_table);
}

inline const Marginals& marginals(const JointDistribution& j) {
  return j.marginals();
}

/// Shannon entropy H(X) of the symbol marginal, in nats.
inline double entropy_x(const JointDistribution& j) {
  double h = 0.0;
  for (double p : j.marginals().px) h -= p * std::log(p);
  return h;
}

namespace detail {

/// Uniform draw in [0,1) from the top 53 bits of a fully specified generator.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Draws a joint distribution uniformly from the (|S|*|X|-1)-simplex
/// (flat Dirichlet): normalized iid Exp(1) variates, with the exponential
/// inverse-CDF applied by hand so results do not depend on the standard
/// library's distribution implementations. Deterministic per seed.
///
/// Draws whose smallest row or column mass falls below 1e-12 are rejected
/// and resampled; after 1000 rejections throws DegenerateSamplerError.
inline JointDistribution sample_random_joint(std::size_t num_secrets,
                                             std::size_t num_symbols,
                                             std::uint64_t seed) {
  if (num_secrets < 1 || num_symbols < 1) {
    throw Error("alphabet sizes must be at least 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> rows(num_secrets,
                                        std::vector<double>(num_symbols));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    double total = 0.0;
    for (auto& row : rows) {
      for (double& cell : row) {
        cell = -std::log1p(-detail::uniform01(rng));
        total += cell;
      }
    }
    if (!(total > 0.0)) continue;

    std::vector<double> col_sum(num_symbols, 0.0);
    bool ok = true;
    for (auto& row : rows) {
      double row_sum = 0.0;
      for (std::size_t x = 0; x < num_symbols; ++x) {
        row[x] /= total;
        row_sum += row[x];
        col_sum[x] += row[x];
      }
      if (!(row_sum >= 1e-12)) ok = false;
    }
    for (double c : col_sum) {
      if (!(c >= 1e-12)) ok = false;
    }
    if (ok) return JointDistribution(rows);
  }
  throw DegenerateSamplerError("rejection sampling exhausted 1000 attempts");
}

}  // namespace liftwatch
