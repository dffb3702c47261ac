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

#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>

namespace liftwatch {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// splitmix64 step (Steele, Lea, Flood 2014). Fully specified, so derived
/// seeds are identical across platforms and standard libraries.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Per-trial child seed: a fixed mix of the master seed and the trial index,
/// so individual trials are reproducible without replaying earlier ones.
inline std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return splitmix64(splitmix64(master_seed) ^
                    (0x9E3779B97F4A7C15ULL * (trial + 1)));
}

/// Formats a real with 12 significant digits. Used for every emitted real,
/// so reruns of the same computation are byte-identical.
inline std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return std::string(buf);
}

}  // namespace liftwatch
