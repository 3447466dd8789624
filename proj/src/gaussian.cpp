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

#include "clickstats/gaussian.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "clickstats/errors.hpp"
#include "parallel.hpp"

namespace clickstats {

namespace {

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

void check_mode(const GaussianState& state, std::size_t mode) {
  if (mode >= state.modes()) {
    throw DimensionError("mode " + std::to_string(mode) + " out of range for " + std::to_string(state.modes()) +
                         "-mode state");
  }
}

// zeta -> S zeta with S = [[A, B], [B^*, A^*]]; Sigma - I/2 is the symmetric
// covariance, which transforms congruently.
GaussianState apply_bogoliubov(const GaussianState& state, const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index m = static_cast<Eigen::Index>(state.modes());
  ComplexMatrix s(2 * m, 2 * m);
  s << a, b, b.conjugate(), a.conjugate();
  const ComplexMatrix half = 0.5 * identity(2 * m);
  ComplexMatrix sigma = s * (state.sigma() - half) * s.adjoint() + half;
  sigma = (sigma + sigma.adjoint()) / 2.0;
  return GaussianState(std::move(sigma), s * state.alpha());
}

}  // namespace

GaussianState::GaussianState(ComplexMatrix sigma, ComplexVector alpha)
    : sigma_(std::move(sigma)), alpha_(std::move(alpha)) {
  if (sigma_.rows() != sigma_.cols() || sigma_.rows() % 2 != 0 || sigma_.rows() != alpha_.size()) {
    throw DimensionError("GaussianState needs a 2M x 2M covariance and a length-2M means vector");
  }
}

PhysicalityReport check_physical(const GaussianState& state, const Tolerances& tol) {
  const std::size_t m = state.modes();
  const ComplexMatrix& sigma = state.sigma();
  if (hermitian_deviation(sigma) > tol.hermitian) {
    throw UnphysicalError("invariant violated: Sigma Hermitian");
  }
  const ComplexMatrix x = block_swap(m);
  if (m > 0 && (x * sigma.conjugate() * x - sigma).cwiseAbs().maxCoeff() > tol.hermitian) {
    throw UnphysicalError("invariant violated: X Sigma^* X = Sigma (block-conjugation symmetry)");
  }
  if (m > 0 && (state.alpha().conjugate() - x * state.alpha()).cwiseAbs().maxCoeff() > tol.hermitian) {
    throw UnphysicalError("invariant violated: alpha^* = X alpha");
  }
  try {
    Cholesky{sigma};
  } catch (const NotPositiveDefiniteError&) {
    throw UnphysicalError("invariant violated: Sigma positive definite");
  }
  PhysicalityReport report;
  if (m > 0) {
    ComplexMatrix shifted = (sigma + sigma.adjoint()) / 2.0;
    shifted.bottomRightCorner(m, m) -= identity(m);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(shifted, Eigen::EigenvaluesOnly);
    report.min_uncertainty_eigenvalue = eig.eigenvalues().minCoeff();
    report.satisfies_uncertainty = report.min_uncertainty_eigenvalue >= -tol.hermitian;
    if (!report.satisfies_uncertainty) {
      std::clog << "clickstats: warning: covariance violates the uncertainty relation (min eigenvalue "
                << report.min_uncertainty_eigenvalue << ")\n";
    }
  }
  return report;
}

GaussianState vacuum_state(std::size_t modes) {
  if (modes == 0) throw DimensionError("vacuum_state needs at least one mode");
  const auto n = static_cast<Eigen::Index>(2 * modes);
  return GaussianState(identity(n), ComplexVector::Zero(n));
}

GaussianState displace(const GaussianState& state, std::size_t mode, Complex beta) {
  check_mode(state, mode);
  ComplexVector alpha = state.alpha();
  alpha(mode) += beta;
  alpha(mode + state.modes()) += std::conj(beta);
  return GaussianState(state.sigma(), std::move(alpha));
}

GaussianState two_mode_squeezed(const GaussianState& state, std::size_t i, std::size_t j, double t) {
  check_mode(state, i);
  check_mode(state, j);
  if (i == j) throw DimensionError("two_mode_squeezed needs two distinct modes");
  const auto m = static_cast<Eigen::Index>(state.modes());
  ComplexMatrix a = identity(m);
  ComplexMatrix b = ComplexMatrix::Zero(m, m);
  a(i, i) = a(j, j) = std::cosh(t);
  b(i, j) = b(j, i) = std::sinh(t);
  return apply_bogoliubov(state, a, b);
}

GaussianState single_mode_squeezed(const GaussianState& state, std::size_t mode, double r) {
  check_mode(state, mode);
  const auto m = static_cast<Eigen::Index>(state.modes());
  ComplexMatrix a = identity(m);
  ComplexMatrix b = ComplexMatrix::Zero(m, m);
  a(mode, mode) = std::cosh(r);
  b(mode, mode) = -std::sinh(r);
  return apply_bogoliubov(state, a, b);
}

GaussianState apply_channel(const GaussianState& state, const ComplexMatrix& t, const Tolerances& tol) {
  if (static_cast<std::size_t>(t.cols()) != state.modes()) {
    throw DimensionError("apply_channel: channel input count must equal the state's mode count");
  }
  check_channel(t, tol);
  const Eigen::Index m_out = t.rows();
  const Eigen::Index m_in = t.cols();
  ComplexMatrix w = ComplexMatrix::Zero(2 * m_out, 2 * m_in);
  w.topLeftCorner(m_out, m_in) = t;
  w.bottomRightCorner(m_out, m_in) = t.conjugate();
  ComplexMatrix sigma = w * state.sigma() * w.adjoint() + identity(2 * m_out) - w * w.adjoint();
  sigma = (sigma + sigma.adjoint()) / 2.0;
  return GaussianState(std::move(sigma), w * state.alpha());
}

GaussianState marginal_state(const GaussianState& state, const ModeSet& modes) {
  return GaussianState(select_mode_pairs(state.sigma(), modes, state.modes()),
                       select_mode_pairs(state.alpha(), modes, state.modes()));
}

namespace {

// exp(-alpha^dagger Sigma^-1 alpha / 2) / sqrt(det Sigma), plus Sigma^-1.
struct VacuumTerm {
  double probability = 1.0;
  ComplexMatrix inverse;
};

VacuumTerm vacuum_term(const ComplexMatrix& sigma, const ComplexVector& alpha) {
  if (sigma.size() == 0) return {1.0, ComplexMatrix(0, 0)};
  const Cholesky chol(sigma);
  const Complex quad = alpha.dot(chol.solve(alpha));
  return {std::exp(-0.5 * quad.real() - 0.5 * chol.log_det()), chol.inverse()};
}

}  // namespace

ReducedForm reduce(const GaussianState& state, const Tolerances& tol) {
  check_physical(state, tol);
  const VacuumTerm vac = vacuum_term(state.sigma(), state.alpha());
  ReducedForm out;
  out.o = identity(state.sigma().rows()) - vac.inverse;
  out.gamma = (vac.inverse * state.alpha()).conjugate();
  out.p0 = vac.probability;
  return out;
}

double vacuum_prob_marginal(const GaussianState& state, const ModeSet& vacuum, const Tolerances& tol) {
  vacuum.check_within(state.modes());
  if (vacuum.empty()) return 1.0;
  const ComplexMatrix sigma = select_mode_pairs(state.sigma(), vacuum, state.modes());
  if (hermitian_deviation(sigma) > tol.hermitian) throw UnphysicalError("invariant violated: Sigma Hermitian");
  try {
    return clip_probability(vacuum_term(sigma, select_mode_pairs(state.alpha(), vacuum, state.modes())).probability,
                            "vacuum_prob_marginal");
  } catch (const NotPositiveDefiniteError&) {
    throw UnphysicalError("invariant violated: Sigma positive definite");
  }
}

Evaluation<double> threshold_prob_gaussian_evaluate(const ReducedForm& reduced, const ClickPattern& d,
                                                    std::size_t threads, const Tolerances& tol) {
  if (d.size() != reduced.modes()) throw DimensionError("threshold_prob_gaussian: pattern length != mode count");
  const ModeSet c = d.clicks();
  const auto sum = ltor_evaluate(select_mode_pairs(reduced.o, c, reduced.modes()),
                                 select_mode_pairs(reduced.gamma, c, reduced.modes()), threads, tol);
  return {clip_probability(reduced.p0 * sum.value, "threshold_prob_gaussian"), reduced.p0 * sum.max_term};
}

double threshold_prob_gaussian(const ReducedForm& reduced, const ClickPattern& d, const Tolerances& tol) {
  return threshold_prob_gaussian_evaluate(reduced, d, 1, tol).value;
}

double threshold_prob_gaussian(const GaussianState& state, const ClickPattern& d, const Tolerances& tol) {
  return threshold_prob_gaussian(reduce(state, tol), d, tol);
}

double photon_number_prob(const ReducedForm& reduced, const Occupation& n, int cutoff, const Tolerances& tol) {
  if (n.size() != reduced.modes()) throw DimensionError("photon_number_prob: occupation length != mode count");
  if (n.total() > cutoff) {
    throw CapExceededError("photon_number_prob: total photon number " + std::to_string(n.total()) +
                           " exceeds cutoff " + std::to_string(cutoff));
  }
  const ComplexMatrix on = repeat_mode_pairs(reduced.o, n);
  const ComplexVector gn = repeat_mode_pairs(reduced.gamma, n);
  const ComplexMatrix a = block_swap(static_cast<std::size_t>(n.total())) * on;
  // X O_nn is symmetric up to rounding; symmetrise before the check in lhaf.
  const Complex h = lhaf((a + a.transpose()) / 2.0, gn, tol);
  const double scale = reduced.p0 / n.factorial_product();
  if (std::abs(h.imag()) * scale > 1e-10) {
    throw NumericalError("photon_number_prob: loop Hafnian has a non-negligible imaginary part");
  }
  return clip_probability(scale * h.real(), "photon_number_prob");
}

double photon_number_prob(const GaussianState& state, const Occupation& n, int cutoff, const Tolerances& tol) {
  return photon_number_prob(reduce(state, tol), n, cutoff, tol);
}

ClickDistribution gaussian_distribution(const GaussianState& state, const DistributionOptions& options,
                                        const Tolerances& tol) {
  const std::size_t modes = state.modes();
  if (modes > options.mode_cap) {
    throw CapExceededError("gaussian_distribution: " + std::to_string(modes) + " modes exceeds cap " +
                           std::to_string(options.mode_cap));
  }
  const ReducedForm reduced = reduce(state, tol);
  const std::size_t count = std::size_t{1} << modes;
  ClickDistribution dist{modes, std::vector<double>(count), 0.0};
  std::vector<double> max_terms(count);
  detail::parallel_for(count, options.threads, [&](std::size_t i) {
    const auto e = threshold_prob_gaussian_evaluate(reduced, ClickPattern::from_index(i, modes), 1, tol);
    dist.probabilities[i] = e.value;
    max_terms[i] = e.max_term;
  });
  for (double t : max_terms) dist.max_term = std::max(dist.max_term, t);
  return dist;
}

ComplexMatrix scattershot_O(const ComplexMatrix& t, double eps, const Tolerances& tol) {
  if (!(eps > 0.0 && eps < 1.0)) throw DimensionError("scattershot_O: eps must lie in (0, 1)");
  check_channel(t, tol);
  const Eigen::Index m_out = t.rows();
  const Eigen::Index m_in = t.cols();
  const Eigen::Index modes = m_out + m_in;
  const ComplexMatrix e = identity(m_in) - t.adjoint() * t;
  // Block offsets in the (a_out, a_herald, a_out^dagger, a_herald^dagger) ordering.
  const Eigen::Index a_out = 0, a_her = m_out, c_out = modes, c_her = modes + m_out;
  ComplexMatrix o = ComplexMatrix::Zero(2 * modes, 2 * modes);
  o.block(a_out, c_her, m_out, m_in) = eps * t;
  o.block(a_her, a_her, m_in, m_in) = eps * eps * e.conjugate();
  o.block(a_her, c_out, m_in, m_out) = eps * t.transpose();
  o.block(c_out, a_her, m_out, m_in) = eps * t.conjugate();
  o.block(c_her, a_out, m_in, m_out) = eps * t.adjoint();
  o.block(c_her, c_her, m_in, m_in) = eps * eps * e;
  return o;
}

}  // namespace clickstats
