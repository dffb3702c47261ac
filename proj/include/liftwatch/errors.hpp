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

#include <stdexcept>
#include <string>

namespace liftwatch {

/// Base class for all liftwatch failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A raw probability table contains an entry below zero.
struct NegativeEntryError : Error {
  using Error::Error;
};

/// Total mass deviates from 1 by more than the input tolerance.
struct MassNotNormalizableError : Error {
  using Error::Error;
};

/// A symbol or secret carries zero marginal mass.
struct DeadSymbolError : Error {
  using Error::Error;
};

/// The rejection sampler failed to produce a usable draw.
struct DegenerateSamplerError : Error {
  using Error::Error;
};

/// A subset leakage query received an empty subset.
struct EmptySubsetError : Error {
  using Error::Error;
};

/// Partition blocks do not cover the high-risk set exactly.
struct PartitionMismatchError : Error {
  using Error::Error;
};

/// H(X) = 0, so normalized utility loss is undefined.
struct ZeroEntropyError : Error {
  using Error::Error;
};

/// The high-risk set exceeds the exhaustive-search bound.
struct TooLargeError : Error {
  using Error::Error;
};

/// Two partitions do not cover the same ground set.
struct CoverMismatchError : Error {
  using Error::Error;
};

/// Reading or writing a file failed.
struct IoError : Error {
  using Error::Error;
};

}  // namespace liftwatch
