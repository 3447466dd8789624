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
#include <string>
#include <vector>

#include "clickstats/click_pattern.hpp"
#include "clickstats/fock.hpp"
#include "clickstats/linalg.hpp"
#include "clickstats/matfunc.hpp"

namespace clickstats {

/// Gaussian state in the (a_1..a_M, a_1^dagger..a_M^dagger) ordering:
/// Husimi covariance Sigma (vacuum = identity) and complex means alpha.
class GaussianState {
 public:
  GaussianState(ComplexMatrix sigma, ComplexVector alpha);

  std::size_t modes() const { return static_cast<std::size_t>(alpha_.size() / 2); }
  const ComplexMatrix& sigma() const { return sigma_; }
  const ComplexVector& alpha() const { return alpha_; }

 private:
  ComplexMatrix sigma_;
  ComplexVector alpha_;
};

/// Outcome of the physicality checks. Hard failures throw; the uncertainty
/// relation (Sigma - diag(0, I) positive semidefinite) is reported only.
struct PhysicalityReport {
  double min_uncertainty_eigenvalue = 0.0;
  bool satisfies_uncertainty = true;
};

/// Throws UnphysicalError naming the violated invariant: Sigma Hermitian,
/// Sigma positive definite, X Sigma^* X = Sigma, alpha^* = X alpha.
PhysicalityReport check_physical(const GaussianState& state, const Tolerances& tol = {});

GaussianState vacuum_state(std::size_t modes);

/// Adds (beta, beta^*) to the means of `mode`.
GaussianState displace(const GaussianState& state, std::size_t mode, Complex beta);

/// exp(t (a_i^dagger a_j^dagger - a_i a_j)); a_i -> cosh(t) a_i + sinh(t) a_j^dagger.
GaussianState two_mode_squeezed(const GaussianState& state, std::size_t i, std::size_t j, double t);

/// a -> cosh(r) a - sinh(r) a^dagger on one mode.
GaussianState single_mode_squeezed(const GaussianState& state, std::size_t mode, double r);

/// Passive linear channel with M_out x M_in transmission T:
/// Sigma' = W Sigma W^dagger + I - W W^dagger, alpha' = W alpha, W = T (+) T^*.
GaussianState apply_channel(const GaussianState& state, const ComplexMatrix& t, const Tolerances& tol = {});

/// Reduced state on `modes` (marginalising the rest).
GaussianState marginal_state(const GaussianState& state, const ModeSet& modes);

/// O = I - Sigma^-1, gamma = (Sigma^-1 alpha)^*, p0 = all-mode vacuum probability.
struct ReducedForm {
  ComplexMatrix o;
  ComplexVector gamma;
  double p0 = 1.0;
  std::size_t modes() const { return static_cast<std::size_t>(gamma.size() / 2); }
};

ReducedForm reduce(const GaussianState& state, const Tolerances& tol = {});

/// exp(-alpha_V^dagger Sigma_VV^-1 alpha_V / 2) / sqrt(det Sigma_VV).
double vacuum_prob_marginal(const GaussianState& state, const ModeSet& vacuum, const Tolerances& tol = {});

/// p(d) = p0 ltor(O_CC, gamma_C).
double threshold_prob_gaussian(const GaussianState& state, const ClickPattern& d, const Tolerances& tol = {});
double threshold_prob_gaussian(const ReducedForm& reduced, const ClickPattern& d, const Tolerances& tol = {});
Evaluation<double> threshold_prob_gaussian_evaluate(const ReducedForm& reduced, const ClickPattern& d,
                                                    std::size_t threads = 1, const Tolerances& tol = {});

inline constexpr int kDefaultPhotonCutoff = 20;

/// p(n) = p0 lhaf(X O_{n,n}, gamma_n) / prod n_j!.
double photon_number_prob(const GaussianState& state, const Occupation& n, int cutoff = kDefaultPhotonCutoff,
                          const Tolerances& tol = {});
double photon_number_prob(const ReducedForm& reduced, const Occupation& n, int cutoff = kDefaultPhotonCutoff,
                          const Tolerances& tol = {});

ClickDistribution gaussian_distribution(const GaussianState& state, const DistributionOptions& options = {},
                                        const Tolerances& tol = {});

/// O(eps) of the scattershot construction for an M_out x M_in channel, over
/// M_out + M_in modes ordered (outputs, heralds):
///   eps [[0, 0, 0, T], [0, eps E^*, T^t, 0], [0, T^*, 0, 0], [T^dagger, 0, 0, eps E]]
/// with E = I - T^dagger T.
ComplexMatrix scattershot_O(const ComplexMatrix& t, double eps, const Tolerances& tol = {});

}  // namespace clickstats
