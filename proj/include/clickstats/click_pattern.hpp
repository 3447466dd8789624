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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "clickstats/linalg.hpp"

namespace clickstats {

/// Threshold-detector outcome, one bit per output mode (1 = click).
class ClickPattern {
 public:
  ClickPattern() = default;
  ClickPattern(std::initializer_list<int> bits);
  explicit ClickPattern(std::vector<std::uint8_t> bits);

  /// Parses a string of '0'/'1' characters, mode 0 first.
  static ClickPattern parse(std::string_view bits);
  /// Pattern number `code` in lexicographic order; mode 0 is the most
  /// significant bit.
  static ClickPattern from_index(std::uint64_t code, std::size_t modes);

  std::size_t size() const { return bits_.size(); }
  bool clicked(std::size_t mode) const { return bits_[mode] != 0; }
  std::size_t click_count() const;

  /// C, the clicked modes.
  ModeSet clicks() const;
  /// V, the vacuum modes.
  ModeSet vacuums() const;

  std::uint64_t index() const;
  std::string to_string() const;

  friend bool operator==(const ClickPattern&, const ClickPattern&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Probabilities of every click pattern over `modes` outputs, stored in
/// lexicographic pattern order.
struct ClickDistribution {
  std::size_t modes = 0;
  std::vector<double> probabilities;
  /// Largest inclusion/exclusion term seen over all patterns.
  double max_term = 0.0;

  double total() const;
  double operator[](const ClickPattern& d) const { return probabilities.at(d.index()); }
  ClickPattern pattern(std::size_t i) const { return ClickPattern::from_index(i, modes); }
};

/// Total variation distance 1/2 sum |p - q| over matching pattern lists.
double total_variation_distance(const ClickDistribution& p, const ClickDistribution& q);

/// Enforces the probability range policy: values within 1e-9 outside [0, 1]
/// are clipped (with a diagnostic on stderr when the residue is above 1e-12),
/// anything further out throws NumericalError.
double clip_probability(double p, std::string_view context);

}  // namespace clickstats
