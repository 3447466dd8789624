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

#include "clickstats/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clickstats/errors.hpp"
#include "parallel.hpp"

namespace clickstats {

namespace {

void require_unitary(const ComplexMatrix& u, const Tolerances& tol, const char* what) {
  if (u.rows() != u.cols()) throw DimensionError(std::string(what) + " needs a square unitary");
  const double dev = unitarity_deviation(u);
  if (dev > tol.hermitian) {
    throw UnphysicalError(std::string(what) + ": matrix is not unitary (deviation " + std::to_string(dev) + ")");
  }
}

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                         std::to_string(got));
  }
}

}  // namespace

FockExperiment::FockExperiment(ComplexMatrix transmission, Occupation input, const Tolerances& tol)
    : transmission_(std::move(transmission)), input_(std::move(input)) {
  require_length(input_.size(), static_cast<std::size_t>(transmission_.cols()), "FockExperiment input");
  check_channel(transmission_, tol);
  input_.factorial_product();  // rejects n_j > 20
  unitary_ = transmission_.rows() == transmission_.cols() &&
             unitarity_deviation(transmission_) < kUnitaryFastPathThreshold;
}

ComplexMatrix FockExperiment::environment_matrix() const {
  return ComplexMatrix::Identity(transmission_.cols(), transmission_.cols()) -
         transmission_.adjoint() * transmission_;
}

Complex fock_amplitude(const ComplexMatrix& u, const Occupation& m, const Occupation& n, const Tolerances& tol) {
  require_unitary(u, tol, "fock_amplitude");
  require_length(m.size(), static_cast<std::size_t>(u.rows()), "fock_amplitude output");
  require_length(n.size(), static_cast<std::size_t>(u.cols()), "fock_amplitude input");
  if (m.total() != n.total()) throw DimensionError("fock_amplitude: photon numbers differ");
  return permanent(repeat_rows_cols(u, m, n)) / std::sqrt(m.factorial_product() * n.factorial_product());
}

Complex generating_function(const ComplexMatrix& u, const Occupation& n, const ComplexVector& x,
                            const Tolerances& tol) {
  require_unitary(u, tol, "generating_function");
  require_length(n.size(), static_cast<std::size_t>(u.cols()), "generating_function input");
  require_length(static_cast<std::size_t>(x.size()), static_cast<std::size_t>(u.rows()), "generating_function x");
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (std::abs(x(j)) > 1.0 + 1e-12) throw DimensionError("generating_function: |x_j| must be at most 1");
  }
  const ComplexMatrix g = u.adjoint() * x.asDiagonal() * u;
  return permanent(repeat_rows_cols(g, n, n)) / n.factorial_product();
}

double marginal_vacuum_prob(const ComplexMatrix& u, const Occupation& n, const ModeSet& vacuum,
                            const Tolerances& tol) {
  vacuum.check_within(static_cast<std::size_t>(u.rows()));
  ComplexVector x = ComplexVector::Ones(u.rows());
  for (auto j : vacuum) x(j) = 0.0;
  const Complex g = generating_function(u, n, x, tol);
  if (std::abs(g.imag()) > 1e-10) throw NumericalError("marginal_vacuum_prob: non-real generating function");
  return clip_probability(g.real(), "marginal_vacuum_prob");
}

Evaluation<double> threshold_prob_fock_evaluate(const FockExperiment& exp, const ClickPattern& d) {
  require_length(d.size(), exp.output_modes(), "threshold_prob_fock pattern");
  if (d.click_count() > static_cast<std::size_t>(exp.photons())) return {0.0, 0.0};
  std::vector<int> row_rep(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) row_rep[j] = d.clicked(j) ? 1 : 0;
  const ComplexMatrix a = repeat_rows_cols(exp.transmission(), Occupation(row_rep), exp.input());
  const Evaluation<Complex> sum =
      exp.is_unitary() ? ubrs_evaluate(a)
                       : brs_evaluate(a, repeat_rows_cols(exp.environment_matrix(), exp.input(), exp.input()));
  const double norm = exp.input().factorial_product();
  if (std::abs(sum.value.imag()) > 1e-8 * std::max(1.0, sum.max_term)) {
    throw NumericalError("threshold_prob_fock: Bristolian has a non-negligible imaginary part");
  }
  return {clip_probability(sum.value.real() / norm, "threshold_prob_fock"), sum.max_term / norm};
}

double threshold_prob_fock(const FockExperiment& exp, const ClickPattern& d) {
  return threshold_prob_fock_evaluate(exp, d).value;
}

double marginal_threshold_prob_fock(const FockExperiment& exp, const ModeSet& clicks, const ModeSet& vacuum) {
  const std::size_t m_out = exp.output_modes();
  const std::size_t m_in = exp.input_modes();
  clicks.check_within(m_out);
  vacuum.check_within(m_out);
  for (auto j : clicks) {
    if (vacuum.contains(j)) throw DimensionError("marginal_threshold_prob_fock: C and V overlap");
  }
  if (clicks.size() > static_cast<std::size_t>(exp.photons())) return 0.0;

  std::vector<std::size_t> marginal_rows;
  for (std::size_t j = 0; j < m_out; ++j) {
    if (!clicks.contains(j) && !vacuum.contains(j)) marginal_rows.push_back(j);
  }
  for (std::size_t j = 0; j < m_in; ++j) marginal_rows.push_back(m_out + j);

  const ComplexMatrix dilation = unitary_dilation(exp.transmission());
  const ComplexMatrix system_columns = dilation.leftCols(m_in);
  const ComplexMatrix stacked = select_rows(system_columns, ModeSet(marginal_rows));
  const ComplexMatrix r = repeat_rows_cols(stacked, Occupation(std::vector<int>(stacked.rows(), 1)), exp.input());
  const ComplexMatrix a = repeat_rows_cols(select_rows(exp.transmission(), clicks),
                                           Occupation(std::vector<int>(clicks.size(), 1)), exp.input());
  const Evaluation<Complex> sum = brs_evaluate(a, r.adjoint() * r);
  return clip_probability(sum.value.real() / exp.input().factorial_product(), "marginal_threshold_prob_fock");
}

ClickDistribution fock_distribution(const FockExperiment& exp, const DistributionOptions& options) {
  const std::size_t modes = exp.output_modes();
  if (modes > options.mode_cap) {
    throw CapExceededError("fock_distribution: " + std::to_string(modes) + " output modes exceeds cap " +
                           std::to_string(options.mode_cap));
  }
  const std::size_t count = std::size_t{1} << modes;
  ClickDistribution dist{modes, std::vector<double>(count), 0.0};
  std::vector<double> max_terms(count);
  detail::parallel_for(count, options.threads, [&](std::size_t i) {
    const auto e = threshold_prob_fock_evaluate(exp, ClickPattern::from_index(i, modes));
    dist.probabilities[i] = e.value;
    max_terms[i] = e.max_term;
  });
  for (double t : max_terms) dist.max_term = std::max(dist.max_term, t);
  return dist;
}

}  // namespace clickstats
