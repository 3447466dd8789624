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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace clickstats {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Floating-point gates used to decide whether exact-math preconditions hold.
struct Tolerances {
  /// Max-abs deviation of H from its conjugate transpose.
  double hermitian = 1e-8;
  /// Eigenvalues in [-psd, 0) are treated as zero.
  double psd = 1e-10;
  /// Singular values up to 1 + singular_value are accepted as contractions.
  double singular_value = 1e-9;
};

/// Strictly increasing list of 0-based mode indices.
class ModeSet {
 public:
  ModeSet() = default;
  ModeSet(std::initializer_list<std::size_t> modes);
  explicit ModeSet(std::vector<std::size_t> modes);

  /// Every mode in [0, count).
  static ModeSet all(std::size_t count);

  std::size_t size() const { return modes_.size(); }
  bool empty() const { return modes_.empty(); }
  std::size_t operator[](std::size_t i) const { return modes_[i]; }
  auto begin() const { return modes_.begin(); }
  auto end() const { return modes_.end(); }
  bool contains(std::size_t mode) const;
  const std::vector<std::size_t>& indices() const { return modes_; }

  /// Throws DimensionError unless every index is below `ambient`.
  void check_within(std::size_t ambient) const;

  /// Modes of [0, ambient) not in this set.
  ModeSet complement(std::size_t ambient) const;

  friend bool operator==(const ModeSet&, const ModeSet&) = default;

 private:
  std::vector<std::size_t> modes_;
};

/// Non-negative photon counts per mode.
class Occupation {
 public:
  Occupation() = default;
  Occupation(std::initializer_list<int> counts);
  explicit Occupation(std::vector<int> counts);

  std::size_t size() const { return counts_.size(); }
  int operator[](std::size_t i) const { return counts_[i]; }
  auto begin() const { return counts_.begin(); }
  auto end() const { return counts_.end(); }
  const std::vector<int>& counts() const { return counts_; }

  /// Total photon number.
  int total() const;
  /// Product of n_j!, in floating point. Throws CapExceededError for n_j > 20.
  double factorial_product() const;
  /// Index list with mode j repeated n_j times, in mode order.
  std::vector<std::size_t> repeated_indices() const;

  friend bool operator==(const Occupation&, const Occupation&) = default;

 private:
  std::vector<int> counts_;
};

/// Permanent evaluation strategy. Both use Ryser's formula.
enum class PermanentMethod {
  /// Gray-code subset order with incremental row sums, O(n 2^n).
  gray_code,
  /// Plain binary-counter subsets, row sums rebuilt each time, O(n^2 2^n).
  binary_counter,
};

/// Permanent by Ryser's inclusion/exclusion formula with compensated
/// accumulation. per of the 0x0 matrix is 1.
Complex permanent(const ComplexMatrix& a, PermanentMethod method = PermanentMethod::gray_code);

/// Repeats row j row_rep[j] times and column k col_rep[k] times, keeping
/// index order. Zero repetitions delete the row or column.
ComplexMatrix repeat_rows_cols(const ComplexMatrix& a, const Occupation& row_rep,
                               const Occupation& col_rep);

/// Rows of `a` listed in `rows`, in order.
ComplexMatrix select_rows(const ComplexMatrix& a, const ModeSet& rows);

/// Rows/columns {j, j + M : j in modes} of a 2M x 2M matrix, keeping the
/// (annihilation block, creation block) ordering.
ComplexMatrix select_mode_pairs(const ComplexMatrix& a, const ModeSet& modes, std::size_t mode_count);
ComplexVector select_mode_pairs(const ComplexVector& v, const ModeSet& modes, std::size_t mode_count);

/// As select_mode_pairs but with mode j taken n_j times in each block.
ComplexMatrix repeat_mode_pairs(const ComplexMatrix& a, const Occupation& n);
ComplexVector repeat_mode_pairs(const ComplexVector& v, const Occupation& n);

/// Block swap [[0, I], [I, 0]] of size 2m x 2m.
ComplexMatrix block_swap(std::size_t m);

/// max_ij |H_ij - conj(H_ji)|.
double hermitian_deviation(const ComplexMatrix& h);
/// max_ij |U^dagger U - I|_ij.
double unitarity_deviation(const ComplexMatrix& u);
/// Largest singular value (0 for empty matrices).
double max_singular_value(const ComplexMatrix& t);

/// Throws InvalidChannelError if any singular value exceeds 1 + tol.singular_value.
void check_channel(const ComplexMatrix& t, const Tolerances& tol = {});

/// Cholesky factor H = L L^dagger of a Hermitian positive-definite matrix.
///
/// Only the lower triangle of H is read. A pivot that is not strictly positive
/// throws NotPositiveDefiniteError.
class Cholesky {
 public:
  explicit Cholesky(const ComplexMatrix& h);

  std::size_t size() const { return static_cast<std::size_t>(lower_.rows()); }
  const ComplexMatrix& lower() const { return lower_; }
  double log_det() const;
  double det() const;
  ComplexVector solve(const ComplexVector& b) const;
  ComplexMatrix inverse() const;

 private:
  ComplexMatrix lower_;
};

struct HermitianInverse {
  ComplexMatrix inverse;
  double det = 1.0;
};

/// Inverse and determinant of a Hermitian positive-definite matrix via
/// Cholesky. det of the 0x0 matrix is 1.
HermitianInverse hermitian_inverse_det(const ComplexMatrix& h, const Tolerances& tol = {});

/// Unique positive semidefinite square root. Eigenvalues in [-tol.psd, 0)
/// are clamped to zero; anything more negative throws UnphysicalError.
ComplexMatrix hermitian_sqrt(const ComplexMatrix& h, const Tolerances& tol = {});

/// Unitary dilation [[T, (I - T T^dagger)^1/2], [(I - T^dagger T)^1/2, -T^dagger]]
/// of an M_out x M_in contraction, of dimension M_out + M_in.
ComplexMatrix unitary_dilation(const ComplexMatrix& t, const Tolerances& tol = {});

/// Haar-distributed M x M unitary from a seeded complex Gaussian matrix.
ComplexMatrix haar_random_unitary(std::size_t m, std::uint64_t seed);

/// Normalised M-mode discrete Fourier matrix, U_jk = w^(jk) / sqrt(M) with
/// w = exp(-2 pi i / M).
ComplexMatrix fourier_matrix(std::size_t m);

}  // namespace clickstats
