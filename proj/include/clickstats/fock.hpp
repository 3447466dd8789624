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

#include "clickstats/click_pattern.hpp"
#include "clickstats/linalg.hpp"
#include "clickstats/matfunc.hpp"

namespace clickstats {

/// ||T^dagger T - I||_max below which a square channel takes the unitary
/// Bristolian path.
inline constexpr double kUnitaryFastPathThreshold = 1e-10;

/// Fock state `input` over M_in modes sent through an M_out x M_in
/// transmission matrix with singular values at most one.
class FockExperiment {
 public:
  FockExperiment(ComplexMatrix transmission, Occupation input, const Tolerances& tol = {});

  const ComplexMatrix& transmission() const { return transmission_; }
  const Occupation& input() const { return input_; }
  std::size_t output_modes() const { return static_cast<std::size_t>(transmission_.rows()); }
  std::size_t input_modes() const { return static_cast<std::size_t>(transmission_.cols()); }
  int photons() const { return input_.total(); }
  /// Square and unitary to within kUnitaryFastPathThreshold.
  bool is_unitary() const { return unitary_; }
  /// E(T) = I - T^dagger T.
  ComplexMatrix environment_matrix() const;

 private:
  ComplexMatrix transmission_;
  Occupation input_;
  bool unitary_ = false;
};

/// <m| U |n> = per(U_{m,n}) / sqrt(prod n_j! m_j!).
Complex fock_amplitude(const ComplexMatrix& u, const Occupation& m, const Occupation& n,
                       const Tolerances& tol = {});

/// Photon-number generating function G(x) = per([U^dagger U_x U]_{n,n}) / prod n_j!
/// with U_x = diag(x). x_j = exp(i phi_j) gives the characteristic function.
Complex generating_function(const ComplexMatrix& u, const Occupation& n, const ComplexVector& x,
                            const Tolerances& tol = {});

/// Probability that every mode in V is empty, others marginalised.
double marginal_vacuum_prob(const ComplexMatrix& u, const Occupation& n, const ModeSet& vacuum,
                            const Tolerances& tol = {});

/// Threshold-detection probability p(d) = brs(T_{d,n}, E(T)_{n,n}) / prod n_j!,
/// or ubrs(U_{d,n}) / prod n_j! for unitary channels.
double threshold_prob_fock(const FockExperiment& exp, const ClickPattern& d);
Evaluation<double> threshold_prob_fock_evaluate(const FockExperiment& exp, const ClickPattern& d);

/// Probability of clicks on `clicks`, vacuum on `vacuum`, with the remaining
/// output modes marginalised. Marginalised rows and the environment rows of
/// the unitary dilation are stacked into the E argument of brs.
double marginal_threshold_prob_fock(const FockExperiment& exp, const ModeSet& clicks, const ModeSet& vacuum);

struct DistributionOptions {
  /// Largest number of output modes accepted (2^modes patterns).
  std::size_t mode_cap = 16;
  std::size_t threads = 1;
};

/// Every click pattern's probability, lexicographic order.
ClickDistribution fock_distribution(const FockExperiment& exp, const DistributionOptions& options = {});

}  // namespace clickstats
