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

#include "clickstats/click_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "clickstats/compensated_sum.hpp"
#include "clickstats/errors.hpp"

namespace clickstats {

ClickPattern::ClickPattern(std::initializer_list<int> bits) {
  for (int b : bits) {
    if (b != 0 && b != 1) throw DimensionError("click pattern bits must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(b));
  }
}

ClickPattern::ClickPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw DimensionError("click pattern bits must be 0 or 1");
  }
}

ClickPattern ClickPattern::parse(std::string_view bits) {
  std::vector<std::uint8_t> out;
  for (char c : bits) {
    if (c != '0' && c != '1') throw DimensionError("click pattern string must contain only 0 and 1");
    out.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return ClickPattern(std::move(out));
}

ClickPattern ClickPattern::from_index(std::uint64_t code, std::size_t modes) {
  std::vector<std::uint8_t> bits(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    bits[j] = static_cast<std::uint8_t>((code >> (modes - 1 - j)) & 1U);
  }
  return ClickPattern(std::move(bits));
}

std::size_t ClickPattern::click_count() const {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

ModeSet ClickPattern::clicks() const {
  std::vector<std::size_t> c;
  for (std::size_t j = 0; j < bits_.size(); ++j) {
    if (bits_[j]) c.push_back(j);
  }
  return ModeSet(std::move(c));
}

ModeSet ClickPattern::vacuums() const {
  std::vector<std::size_t> v;
  for (std::size_t j = 0; j < bits_.size(); ++j) {
    if (!bits_[j]) v.push_back(j);
  }
  return ModeSet(std::move(v));
}

std::uint64_t ClickPattern::index() const {
  std::uint64_t code = 0;
  for (auto b : bits_) code = (code << 1) | b;
  return code;
}

std::string ClickPattern::to_string() const {
  std::string s;
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

double ClickDistribution::total() const {
  CompensatedSum s;
  for (double p : probabilities) s += p;
  return s.value();
}

double total_variation_distance(const ClickDistribution& p, const ClickDistribution& q) {
  if (p.probabilities.size() != q.probabilities.size()) {
    throw DimensionError("TVD needs distributions over the same patterns");
  }
  CompensatedSum s;
  for (std::size_t i = 0; i < p.probabilities.size(); ++i) {
    s += std::abs(p.probabilities[i] - q.probabilities[i]);
  }
  return 0.5 * s.value();
}

double clip_probability(double p, std::string_view context) {
  constexpr double kResidue = 1e-9;
  if (!std::isfinite(p) || p < -kResidue || p > 1.0 + kResidue) {
    throw NumericalError(std::string(context) + ": probability " + std::to_string(p) +
                         " outside [0, 1] beyond rounding residue");
  }
  const double clipped = std::clamp(p, 0.0, 1.0);
  if (std::abs(clipped - p) > 1e-12) {
    std::clog << "clickstats: " << context << ": clipped probability residue " << (p - clipped) << '\n';
  }
  return clipped;
}

}  // namespace clickstats
