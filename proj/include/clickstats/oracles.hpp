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

// Brute-force reference implementations. Each is exponential on purpose and
// shares no evaluation path with the fast routines it is used to check.

#include <cstddef>

#include "clickstats/click_pattern.hpp"
#include "clickstats/fock.hpp"
#include "clickstats/gaussian.hpp"
#include "clickstats/linalg.hpp"

namespace clickstats::oracles {

/// Sum over all n! permutations. n <= 9.
Complex permanent_naive(const ComplexMatrix& a);

/// Sum over all perfect matchings of 2m vertices in which any vertex may
/// instead take a self-loop weighted by gamma. The diagonal of A is unused.
/// 2m <= 8.
Complex lhaf_reference(const ComplexMatrix& a, const ComplexVector& gamma);

/// Dilates T to a unitary, enumerates every output photon-number pattern on
/// system plus environment modes, and sums |amplitude|^2 over patterns that
/// agree with d on the system modes. N <= 5, M_out <= 6.
double threshold_enum_fock(const FockExperiment& exp, const ClickPattern& d);

/// As threshold_enum_fock, over a caller-supplied (M_out + M_in) unitary whose
/// top-left M_out x M_in block is the channel.
double threshold_enum_fock(const ComplexMatrix& dilation, std::size_t output_modes, const Occupation& n,
                           const ClickPattern& d);

/// Balanced loss applied before a lossless unitary: each input photon survives
/// independently with probability eta, and the surviving Fock states are
/// propagated through U by enumeration. N <= 5, M <= 6.
double threshold_enum_balanced_loss(const ComplexMatrix& u, double eta, const Occupation& n,
                                    const ClickPattern& d);

/// sum_{Z subset C} (-1)^|Z| p(vacuum on V and Z). M <= 8.
double threshold_incexc_gaussian(const GaussianState& state, const ClickPattern& d);

/// ell-th Taylor coefficient of eta -> ltor(eta O, sqrt(eta) gamma), which
/// starts at eta^ell. g(eta) / eta^ell is sampled at eta = 0.02, ..., 0.02 (ell + 1),
/// the degree-ell interpolant is found from the Vandermonde system, and its
/// value at eta = 0 is returned. ell = m <= 3.
Complex lhaf_from_ltor_series(const ComplexMatrix& o, const ComplexVector& gamma, std::size_t ell);

/// Single-photon-projection model: q(d) is the probability that the system
/// modes hold exactly d_j photons (0 or 1), environment unconstrained. Not
/// normalised. N <= 5, M_out <= 12.
ClickDistribution approx_model_distribution(const FockExperiment& exp);

/// Exact threshold distribution from the same dilated enumeration.
/// N <= 5, M_out <= 12.
ClickDistribution threshold_enum_distribution(const FockExperiment& exp);

}  // namespace clickstats::oracles
