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

#include <algorithm>
#include <cmath>
#include <complex>

namespace clickstats {

/// Neumaier (improved Kahan-Babuska) accumulator for real values.
///
/// Inclusion/exclusion sums add terms of alternating sign that are often many
/// orders of magnitude larger than the result. The running compensation
/// recovers the low-order bits lost by each addition, and the largest term
/// magnitude seen is kept as a cancellation diagnostic.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    max_term_ = std::max(max_term_, std::abs(value));
  }

  CompensatedSum& operator+=(double value) {
    add(value);
    return *this;
  }

  /// Folds another partial sum into this one, including its compensation.
  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.compensation_);
    max_term_ = std::max(max_term_, other.max_term_);
  }

  double value() const { return sum_ + compensation_; }
  double max_term() const { return max_term_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
  double max_term_ = 0.0;
};

/// Component-wise compensated accumulation of complex values.
class CompensatedComplexSum {
 public:
  void add(std::complex<double> value) {
    re_.add(value.real());
    im_.add(value.imag());
    max_term_ = std::max(max_term_, std::abs(value));
  }

  CompensatedComplexSum& operator+=(std::complex<double> value) {
    add(value);
    return *this;
  }

  void merge(const CompensatedComplexSum& other) {
    re_.merge(other.re_);
    im_.merge(other.im_);
    max_term_ = std::max(max_term_, other.max_term_);
  }

  std::complex<double> value() const { return {re_.value(), im_.value()}; }
  double max_term() const { return max_term_; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
  double max_term_ = 0.0;
};

}  // namespace clickstats
