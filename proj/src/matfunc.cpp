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

#include "clickstats/matfunc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "clickstats/compensated_sum.hpp"
#include "clickstats/errors.hpp"

namespace clickstats {

namespace {

constexpr int kMaxSubsetBits = 40;

// Indices {j, j + m : j in modes}, annihilation block first.
std::vector<Eigen::Index> mask_pairs(std::uint64_t mask, std::size_t m) {
  std::vector<Eigen::Index> idx;
  for (std::size_t j = 0; j < m; ++j) {
    if (mask & (std::uint64_t{1} << j)) idx.push_back(static_cast<Eigen::Index>(j));
  }
  const std::size_t half = idx.size();
  for (std::size_t i = 0; i < half; ++i) idx.push_back(idx[i] + static_cast<Eigen::Index>(m));
  return idx;
}

void check_paired(const ComplexMatrix& o, const ComplexVector& gamma, const char* what) {
  if (o.rows() != o.cols() || o.rows() % 2 != 0) {
    throw DimensionError(std::string(what) + " needs a square matrix of even size");
  }
  if (gamma.size() != o.rows()) {
    throw DimensionError(std::string(what) + ": vector length must match matrix size");
  }
  if (o.rows() / 2 > kMaxSubsetBits) throw CapExceededError(std::string(what) + " size above cap");
}

}  // namespace

Evaluation<Complex> brs_evaluate(const ComplexMatrix& a, const ComplexMatrix& e) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (e.rows() != n || e.cols() != n) {
    throw DimensionError("brs: E must be n x n with n = cols(A)");
  }
  if (m > kMaxSubsetBits) throw CapExceededError("brs: row count above cap");
  CompensatedComplexSum total;
  const std::uint64_t subsets = std::uint64_t{1} << m;
  ComplexMatrix g(n, n);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    g = e;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (mask & (std::uint64_t{1} << k)) g.noalias() += a.row(k).adjoint() * a.row(k);
    }
    const Complex p = permanent(g);
    total += ((m - std::popcount(mask)) % 2 == 0) ? p : -p;
  }
  return {total.value(), total.max_term()};
}

Complex brs(const ComplexMatrix& a, const ComplexMatrix& e) { return brs_evaluate(a, e).value; }

Evaluation<Complex> ubrs_evaluate(const ComplexMatrix& a) {
  return brs_evaluate(a, ComplexMatrix::Zero(a.cols(), a.cols()));
}

Complex ubrs(const ComplexMatrix& a) { return ubrs_evaluate(a).value; }

namespace {

// exp(z) - 1 without cancellation for small |z|.
Complex expm1(Complex z) {
  const double a = std::expm1(z.real());
  const double s = std::sin(0.5 * z.imag());
  return {a * std::cos(z.imag()) - 2.0 * s * s, (a + 1.0) * std::sin(z.imag())};
}

struct LtorPartial {
  CompensatedComplexSum sum;
  double max_term = 0.0;
};

// The signs sum to zero for m >= 1, so each subset contributes (term - 1):
// for weak states every term is close to 1 and this removes the leading
// cancellation.  max_term still reports the raw term magnitude.
LtorPartial ltor_range(const ComplexMatrix& o, const ComplexVector& gamma, std::uint64_t begin, std::uint64_t end) {
  const std::size_t m = static_cast<std::size_t>(o.rows() / 2);
  LtorPartial partial;
  for (std::uint64_t mask = begin; mask < end; ++mask) {
    const int sign = ((m - std::popcount(mask)) % 2 == 0) ? 1 : -1;
    if (mask == 0) {
      partial.max_term = std::max(partial.max_term, 1.0);
      if (m == 0) partial.sum += Complex(1.0);
      continue;
    }
    const auto idx = mask_pairs(mask, m);
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    ComplexMatrix h(k, k);
    ComplexVector v(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      v(i) = std::conj(gamma(idx[i]));
      for (Eigen::Index j = 0; j < k; ++j) h(i, j) = (i == j ? 1.0 : 0.0) - o(idx[i], idx[j]);
    }
    Cholesky chol = [&] {
      try {
        return Cholesky(h);
      } catch (const NotPositiveDefiniteError&) {
        throw UnphysicalError("I - O_YY is not positive definite for a mode subset");
      }
    }();
    const Complex exponent = 0.5 * v.dot(chol.solve(v)) - 0.5 * chol.log_det();
    partial.max_term = std::max(partial.max_term, std::exp(exponent.real()));
    partial.sum += static_cast<double>(sign) * expm1(exponent);
  }
  return partial;
}

}  // namespace

Evaluation<double> ltor_evaluate(const ComplexMatrix& o, const ComplexVector& gamma, std::size_t thread_hint,
                                 const Tolerances& tol) {
  check_paired(o, gamma, "ltor");
  const double dev = hermitian_deviation(o);
  if (dev > tol.hermitian) {
    throw UnphysicalError("ltor: O is not Hermitian (deviation " + std::to_string(dev) + ")");
  }
  const std::size_t m = static_cast<std::size_t>(o.rows() / 2);
  const std::uint64_t subsets = std::uint64_t{1} << m;
  const std::size_t workers =
      static_cast<std::size_t>(std::clamp<std::uint64_t>(std::max<std::size_t>(thread_hint, 1), 1, subsets));

  std::vector<LtorPartial> partials(workers);
  std::vector<std::uint64_t> bounds(workers + 1);
  for (std::size_t w = 0; w <= workers; ++w) bounds[w] = subsets * w / workers;

  if (workers == 1) {
    partials[0] = ltor_range(o, gamma, 0, subsets);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            partials[w] = ltor_range(o, gamma, bounds[w], bounds[w + 1]);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  CompensatedComplexSum total;
  double max_term = 0.0;
  for (const auto& p : partials) {
    total.merge(p.sum);
    max_term = std::max(max_term, p.max_term);
  }
  const Complex value = total.value();
  if (std::abs(value.imag()) > 1e-8 * std::max(1.0, max_term)) {
    throw NumericalError("ltor: imaginary residue " + std::to_string(value.imag()) +
                         " indicates an unphysical input");
  }
  return {value.real(), max_term};
}

double ltor(const ComplexMatrix& o, const ComplexVector& gamma, const Tolerances& tol) {
  return ltor_evaluate(o, gamma, 1, tol).value;
}

double ltor_parallel(const ComplexMatrix& o, const ComplexVector& gamma, std::size_t thread_hint,
                     const Tolerances& tol) {
  return ltor_evaluate(o, gamma, thread_hint, tol).value;
}

Evaluation<double> tor_evaluate(const ComplexMatrix& o, std::size_t thread_hint, const Tolerances& tol) {
  return ltor_evaluate(o, ComplexVector::Zero(o.rows()), thread_hint, tol);
}

double tor(const ComplexMatrix& o, const Tolerances& tol) { return tor_evaluate(o, 1, tol).value; }

Complex lhaf(const ComplexMatrix& a, const ComplexVector& gamma, const Tolerances& tol) {
  check_paired(a, gamma, "lhaf");
  if (a.size() > 0 && (a - a.transpose()).cwiseAbs().maxCoeff() > tol.hermitian) {
    throw DimensionError("lhaf needs a symmetric matrix");
  }
  const std::size_t m = static_cast<std::size_t>(a.rows() / 2);
  if (m == 0) return Complex(1.0);

  ComplexMatrix off_diagonal = a;
  off_diagonal.diagonal().setZero();

  CompensatedComplexSum total;
  const std::uint64_t subsets = std::uint64_t{1} << m;
  std::vector<Complex> power_sums(m + 1);
  std::vector<Complex> series(m + 1);
  // The empty subset contributes [eta^m] exp(0) = 0 for m >= 1.
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    const auto idx = mask_pairs(mask, m);
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    const Eigen::Index half = k / 2;
    // B = X A_YY, g = gamma_Y
    ComplexMatrix b(k, k);
    ComplexVector g(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const Eigen::Index swapped = i < half ? i + half : i - half;
      g(i) = gamma(idx[i]);
      for (Eigen::Index j = 0; j < k; ++j) b(i, j) = off_diagonal(idx[swapped], idx[j]);
    }
    ComplexVector walk(k);
    for (Eigen::Index i = 0; i < k; ++i) walk(i) = g(i < half ? i + half : i - half);

    ComplexMatrix power = b;
    for (std::size_t p = 1; p <= m; ++p) {
      // tr(B^p) / 2p + g^t B^(p-1) X g / 2
      power_sums[p] = power.trace() / (2.0 * static_cast<double>(p)) + 0.5 * g.cwiseProduct(walk).sum();
      if (p < m) {
        power = power * b;
        walk = b * walk;
      }
    }
    // Coefficients of exp(sum_p power_sums[p] eta^p) up to eta^m.
    series[0] = 1.0;
    for (std::size_t j = 1; j <= m; ++j) {
      Complex s(0.0);
      for (std::size_t p = 1; p <= j; ++p) s += static_cast<double>(p) * power_sums[p] * series[j - p];
      series[j] = s / static_cast<double>(j);
    }
    const int sign = ((m - std::popcount(mask)) % 2 == 0) ? 1 : -1;
    total += static_cast<double>(sign) * series[m];
  }
  return total.value();
}

}  // namespace clickstats
