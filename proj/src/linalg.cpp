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

#include "clickstats/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "clickstats/errors.hpp"

namespace clickstats {

namespace {

void require_strictly_increasing(const std::vector<std::size_t>& modes) {
  for (std::size_t i = 1; i < modes.size(); ++i) {
    if (modes[i] <= modes[i - 1]) {
      throw DimensionError("ModeSet indices must be strictly increasing");
    }
  }
}

}  // namespace

ModeSet::ModeSet(std::initializer_list<std::size_t> modes) : modes_(modes) {
  require_strictly_increasing(modes_);
}

ModeSet::ModeSet(std::vector<std::size_t> modes) : modes_(std::move(modes)) {
  require_strictly_increasing(modes_);
}

ModeSet ModeSet::all(std::size_t count) {
  std::vector<std::size_t> modes(count);
  for (std::size_t i = 0; i < count; ++i) modes[i] = i;
  return ModeSet(std::move(modes));
}

bool ModeSet::contains(std::size_t mode) const {
  return std::binary_search(modes_.begin(), modes_.end(), mode);
}

void ModeSet::check_within(std::size_t ambient) const {
  if (!modes_.empty() && modes_.back() >= ambient) {
    throw DimensionError("mode index " + std::to_string(modes_.back()) + " out of range for " +
                         std::to_string(ambient) + " modes");
  }
}

ModeSet ModeSet::complement(std::size_t ambient) const {
  check_within(ambient);
  std::vector<std::size_t> rest;
  for (std::size_t j = 0; j < ambient; ++j) {
    if (!contains(j)) rest.push_back(j);
  }
  return ModeSet(std::move(rest));
}

Occupation::Occupation(std::initializer_list<int> counts) : Occupation(std::vector<int>(counts)) {}

Occupation::Occupation(std::vector<int> counts) : counts_(std::move(counts)) {
  for (int c : counts_) {
    if (c < 0) throw DimensionError("occupation counts must be non-negative");
  }
}

int Occupation::total() const {
  int n = 0;
  for (int c : counts_) n += c;
  return n;
}

double Occupation::factorial_product() const {
  double product = 1.0;
  for (int c : counts_) {
    if (c > 20) throw CapExceededError("per-mode photon number above 20 is not supported");
    for (int k = 2; k <= c; ++k) product *= k;
  }
  return product;
}

std::vector<std::size_t> Occupation::repeated_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    for (int r = 0; r < counts_[j]; ++r) out.push_back(j);
  }
  return out;
}

ComplexMatrix repeat_rows_cols(const ComplexMatrix& a, const Occupation& row_rep,
                               const Occupation& col_rep) {
  if (row_rep.size() != static_cast<std::size_t>(a.rows()) ||
      col_rep.size() != static_cast<std::size_t>(a.cols())) {
    throw DimensionError("repetition vector length does not match matrix shape");
  }
  const auto rows = row_rep.repeated_indices();
  const auto cols = col_rep.repeated_indices();
  ComplexMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(i, j) = a(rows[i], cols[j]);
    }
  }
  return out;
}

ComplexMatrix select_rows(const ComplexMatrix& a, const ModeSet& rows) {
  rows.check_within(a.rows());
  ComplexMatrix out(rows.size(), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = a.row(rows[i]);
  return out;
}

namespace {

std::vector<std::size_t> paired_indices(const std::vector<std::size_t>& modes, std::size_t mode_count) {
  std::vector<std::size_t> idx;
  idx.reserve(2 * modes.size());
  for (auto j : modes) idx.push_back(j);
  for (auto j : modes) idx.push_back(j + mode_count);
  return idx;
}

ComplexMatrix principal_submatrix(const ComplexMatrix& a, const std::vector<std::size_t>& idx) {
  ComplexMatrix out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = a(idx[i], idx[j]);
  }
  return out;
}

ComplexVector gather(const ComplexVector& v, const std::vector<std::size_t>& idx) {
  ComplexVector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

void check_paired_square(Eigen::Index rows, Eigen::Index cols, std::size_t mode_count) {
  if (rows != cols || static_cast<std::size_t>(rows) != 2 * mode_count) {
    throw DimensionError("expected a 2M x 2M matrix with M = " + std::to_string(mode_count));
  }
}

}  // namespace

ComplexMatrix select_mode_pairs(const ComplexMatrix& a, const ModeSet& modes, std::size_t mode_count) {
  check_paired_square(a.rows(), a.cols(), mode_count);
  modes.check_within(mode_count);
  return principal_submatrix(a, paired_indices(modes.indices(), mode_count));
}

ComplexVector select_mode_pairs(const ComplexVector& v, const ModeSet& modes, std::size_t mode_count) {
  if (static_cast<std::size_t>(v.size()) != 2 * mode_count) {
    throw DimensionError("expected a vector of length 2M");
  }
  modes.check_within(mode_count);
  return gather(v, paired_indices(modes.indices(), mode_count));
}

ComplexMatrix repeat_mode_pairs(const ComplexMatrix& a, const Occupation& n) {
  check_paired_square(a.rows(), a.cols(), n.size());
  return principal_submatrix(a, paired_indices(n.repeated_indices(), n.size()));
}

ComplexVector repeat_mode_pairs(const ComplexVector& v, const Occupation& n) {
  if (static_cast<std::size_t>(v.size()) != 2 * n.size()) {
    throw DimensionError("expected a vector of length 2M");
  }
  return gather(v, paired_indices(n.repeated_indices(), n.size()));
}

ComplexMatrix block_swap(std::size_t m) {
  ComplexMatrix x = ComplexMatrix::Zero(2 * m, 2 * m);
  for (std::size_t j = 0; j < m; ++j) {
    x(j, j + m) = 1.0;
    x(j + m, j) = 1.0;
  }
  return x;
}

double hermitian_deviation(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("Hermitian check needs a square matrix");
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_deviation(const ComplexMatrix& u) {
  if (u.size() == 0) return 0.0;
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

double max_singular_value(const ComplexMatrix& t) {
  if (t.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(t);
  return svd.singularValues()(0);
}

void check_channel(const ComplexMatrix& t, const Tolerances& tol) {
  const double s = max_singular_value(t);
  if (s > 1.0 + tol.singular_value) {
    throw InvalidChannelError("transmission matrix has singular value " + std::to_string(s) +
                              " > 1 (channel must be a contraction)");
  }
}

Cholesky::Cholesky(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("Cholesky needs a square matrix");
  const Eigen::Index n = h.rows();
  lower_ = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = h(j, j).real();
    for (Eigen::Index k = 0; k < j; ++k) pivot -= std::norm(lower_(j, k));
    if (!(pivot > 0.0)) {
      throw NotPositiveDefiniteError("matrix is not positive definite (pivot " + std::to_string(pivot) +
                                     " at index " + std::to_string(j) + ")");
    }
    const double diag = std::sqrt(pivot);
    lower_(j, j) = diag;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      Complex s = h(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= lower_(i, k) * std::conj(lower_(j, k));
      lower_(i, j) = s / diag;
    }
  }
}

double Cholesky::log_det() const {
  double s = 0.0;
  for (Eigen::Index j = 0; j < lower_.rows(); ++j) s += std::log(lower_(j, j).real());
  return 2.0 * s;
}

double Cholesky::det() const {
  double d = 1.0;
  for (Eigen::Index j = 0; j < lower_.rows(); ++j) d *= std::norm(lower_(j, j));
  return d;
}

ComplexVector Cholesky::solve(const ComplexVector& b) const {
  const Eigen::Index n = lower_.rows();
  if (b.size() != n) throw DimensionError("right-hand side length mismatch");
  ComplexVector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex s = b(i);
    for (Eigen::Index k = 0; k < i; ++k) s -= lower_(i, k) * y(k);
    y(i) = s / lower_(i, i);
  }
  ComplexVector x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    Complex s = y(i);
    for (Eigen::Index k = i + 1; k < n; ++k) s -= std::conj(lower_(k, i)) * x(k);
    x(i) = s / lower_(i, i);
  }
  return x;
}

ComplexMatrix Cholesky::inverse() const {
  const Eigen::Index n = lower_.rows();
  ComplexMatrix inv(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    inv.col(j) = solve(ComplexVector::Unit(n, j));
  }
  // Symmetrise away rounding so the result is exactly Hermitian.
  return (inv + inv.adjoint()) / 2.0;
}

HermitianInverse hermitian_inverse_det(const ComplexMatrix& h, const Tolerances& tol) {
  const double dev = hermitian_deviation(h);
  if (dev > tol.hermitian) {
    throw UnphysicalError("matrix is not Hermitian (deviation " + std::to_string(dev) + ")");
  }
  if (h.size() == 0) return {ComplexMatrix(0, 0), 1.0};
  const Cholesky chol(h);
  return {chol.inverse(), chol.det()};
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& h, const Tolerances& tol) {
  const double dev = hermitian_deviation(h);
  if (dev > tol.hermitian) {
    throw UnphysicalError("matrix is not Hermitian (deviation " + std::to_string(dev) + ")");
  }
  if (h.size() == 0) return ComplexMatrix(0, 0);
  const ComplexMatrix sym = (h + h.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sym);
  Eigen::VectorXd values = eig.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < -tol.psd) {
      throw UnphysicalError("matrix is not positive semidefinite (eigenvalue " +
                            std::to_string(values(i)) + ")");
    }
    values(i) = std::sqrt(std::max(values(i), 0.0));
  }
  const ComplexMatrix& v = eig.eigenvectors();
  return v * values.cast<Complex>().asDiagonal() * v.adjoint();
}

ComplexMatrix unitary_dilation(const ComplexMatrix& t, const Tolerances& tol) {
  check_channel(t, tol);
  const Eigen::Index m_out = t.rows();
  const Eigen::Index m_in = t.cols();
  // A singular value of 1 + s leaves an eigenvalue near -2s in I - T^dagger T.
  Tolerances relaxed = tol;
  relaxed.psd = std::max(tol.psd, 3.0 * tol.singular_value);
  ComplexMatrix u(m_out + m_in, m_out + m_in);
  u.topLeftCorner(m_out, m_in) = t;
  u.topRightCorner(m_out, m_out) =
      hermitian_sqrt(ComplexMatrix::Identity(m_out, m_out) - t * t.adjoint(), relaxed);
  u.bottomLeftCorner(m_in, m_in) =
      hermitian_sqrt(ComplexMatrix::Identity(m_in, m_in) - t.adjoint() * t, relaxed);
  u.bottomRightCorner(m_in, m_out) = -t.adjoint();
  return u;
}

ComplexMatrix haar_random_unitary(std::size_t m, std::uint64_t seed) {
  if (m == 0) throw DimensionError("Haar unitary needs at least one mode");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix z(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (std::size_t j = 0; j < m; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= mag > 0.0 ? d / mag : Complex(1.0);
  }
  return q;
}

ComplexMatrix fourier_matrix(std::size_t m) {
  ComplexMatrix u(m, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * k) % m) / static_cast<double>(m);
      u(j, k) = std::polar(scale, angle);
    }
  }
  return u;
}

}  // namespace clickstats
