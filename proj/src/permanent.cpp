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

#include <bit>
#include <cstdint>
#include <vector>

#include "clickstats/compensated_sum.hpp"
#include "clickstats/errors.hpp"
#include "clickstats/linalg.hpp"

namespace clickstats {

namespace {

constexpr int kMaxPermanentSize = 40;

// per(A) = (-1)^n sum_{S != {}} (-1)^{|S|} prod_i sum_{j in S} a_ij
Complex ryser_gray(const ComplexMatrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<Complex> row_sums(n, Complex(0.0));
  CompensatedComplexSum total;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int col = std::countr_zero(k);
    const std::uint64_t bit = std::uint64_t{1} << col;
    gray ^= bit;
    if (gray & bit) {
      for (int i = 0; i < n; ++i) row_sums[i] += a(i, col);
    } else {
      for (int i = 0; i < n; ++i) row_sums[i] -= a(i, col);
    }
    Complex product = row_sums[0];
    for (int i = 1; i < n; ++i) product *= row_sums[i];
    total += (std::popcount(gray) % 2 == 0) ? product : -product;
  }
  return (n % 2 == 0) ? total.value() : -total.value();
}

Complex ryser_binary(const ComplexMatrix& a) {
  const int n = static_cast<int>(a.rows());
  CompensatedComplexSum total;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    Complex product(1.0);
    for (int i = 0; i < n; ++i) {
      Complex s(0.0);
      for (int j = 0; j < n; ++j) {
        if (mask & (std::uint64_t{1} << j)) s += a(i, j);
      }
      product *= s;
    }
    total += (std::popcount(mask) % 2 == 0) ? product : -product;
  }
  return (n % 2 == 0) ? total.value() : -total.value();
}

}  // namespace

Complex permanent(const ComplexMatrix& a, PermanentMethod method) {
  if (a.rows() != a.cols()) throw DimensionError("permanent needs a square matrix");
  if (a.rows() == 0) return Complex(1.0);
  if (a.rows() > kMaxPermanentSize) throw CapExceededError("permanent size above 40");
  return method == PermanentMethod::gray_code ? ryser_gray(a) : ryser_binary(a);
}

}  // namespace clickstats
