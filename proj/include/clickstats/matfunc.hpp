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

#include "clickstats/linalg.hpp"

namespace clickstats {

/// Value of an inclusion/exclusion sum together with the magnitude of its
/// largest term. A large max_term relative to |value| signals cancellation.
template <class T>
struct Evaluation {
  T value{};
  double max_term = 0.0;
};

/// Bristolian of an m x n matrix A and n x n matrix E:
///   sum_{Y subset [m]} (-1)^(m - |Y|) per(A_Y^dagger A_Y + E).
/// O(n 2^(n+m)).
Complex brs(const ComplexMatrix& a, const ComplexMatrix& e);
Evaluation<Complex> brs_evaluate(const ComplexMatrix& a, const ComplexMatrix& e);

/// Unitary Bristolian, brs(A, 0). The empty-Y term is per(0_{n x n}), which
/// is zero for n >= 1.
Complex ubrs(const ComplexMatrix& a);
Evaluation<Complex> ubrs_evaluate(const ComplexMatrix& a);

/// Loop Torontonian of a 2m x 2m matrix O and 2m vector gamma:
///   sum_Y (-1)^(m-|Y|) exp(gamma_Y^t [I - O_YY]^-1 gamma_Y^* / 2) / sqrt(det(I - O_YY)).
/// Every I - O_YY must be Hermitian positive definite; a failing subset
/// throws UnphysicalError. O(m^3 2^m).
double ltor(const ComplexMatrix& o, const ComplexVector& gamma, const Tolerances& tol = {});

/// As ltor, with the subset range split over `thread_hint` workers. Partial
/// sums are combined in worker order, so the result is bit-stable for a
/// fixed thread_hint, and thread_hint = 1 is bit-identical to ltor.
double ltor_parallel(const ComplexMatrix& o, const ComplexVector& gamma, std::size_t thread_hint,
                     const Tolerances& tol = {});

Evaluation<double> ltor_evaluate(const ComplexMatrix& o, const ComplexVector& gamma,
                                 std::size_t thread_hint = 1, const Tolerances& tol = {});

/// Torontonian, ltor(O, 0).
double tor(const ComplexMatrix& o, const Tolerances& tol = {});
Evaluation<double> tor_evaluate(const ComplexMatrix& o, std::size_t thread_hint = 1,
                                const Tolerances& tol = {});

/// Loop Hafnian of a symmetric 2m x 2m matrix with loop weights gamma, by
/// the trace formula. Vertices j and j + m form the fixed reference pairing;
/// the diagonal of A is ignored (loops are weighted by gamma only).
Complex lhaf(const ComplexMatrix& a, const ComplexVector& gamma, const Tolerances& tol = {});

}  // namespace clickstats
