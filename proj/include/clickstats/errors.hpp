// Copyright 2026 The clickstats Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace clickstats {

/// Shapes or lengths that do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input violates a physical invariant (Hermiticity, positivity, channel
/// contraction, block symmetry). The message names the invariant.
class UnphysicalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A Cholesky pivot was not strictly positive.
class NotPositiveDefiniteError : public UnphysicalError {
 public:
  using UnphysicalError::UnphysicalError;
};

/// Transmission matrix with a singular value above one.
class InvalidChannelError : public UnphysicalError {
 public:
  using UnphysicalError::UnphysicalError;
};

/// Result fell outside its admissible range by more than rounding allows.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hard size cap was exceeded (oracles, distributions, photon cutoffs).
class CapExceededError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace clickstats
