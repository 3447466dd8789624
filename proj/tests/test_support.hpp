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

#include <cmath>
#include <cstdint>
#include <random>

#include "clickstats/gaussian.hpp"
#include "clickstats/linalg.hpp"

namespace clickstats::testing {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

inline ComplexMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  ComplexMatrix a = random_matrix(n, n, rng);
  return (0.5 * (a + a.transpose())).eval();
}

inline ComplexVector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

// Haar unitary with per-mode transmissions drawn from [lo, 1].
inline ComplexMatrix random_lossy(std::size_t m, std::mt19937_64& rng, double lo = 0.3) {
  std::uniform_real_distribution<double> u(lo, 1.0);
  ComplexMatrix t = haar_random_unitary(m, rng());
  for (std::size_t j = 0; j < m; ++j) t.col(j) *= std::sqrt(u(rng));
  return haar_random_unitary(m, rng()) * t;
}

// Squeezers, displacements and a lossy interferometer on vacuum.  `scale`
// bounds the squeezing parameters and displacement amplitudes.
inline GaussianState random_gaussian(std::size_t m, std::mt19937_64& rng, double scale = 0.5,
                                     bool displaced = true) {
  std::uniform_real_distribution<double> u(-scale, scale);
  GaussianState s = vacuum_state(m);
  for (std::size_t j = 0; j < m; ++j) s = single_mode_squeezed(s, j, u(rng));
  if (m > 1) s = two_mode_squeezed(s, 0, m - 1, u(rng));
  if (displaced)
    for (std::size_t j = 0; j < m; ++j) s = displace(s, j, Complex(u(rng), u(rng)));
  return apply_channel(s, random_lossy(m, rng, 0.5));
}

inline double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace clickstats::testing
