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


#include <doctest.h>

#include <cmath>
#include <random>

#include "clickstats/errors.hpp"
#include "clickstats/fock.hpp"
#include "clickstats/oracles.hpp"
#include "test_support.hpp"

using namespace clickstats;
using clickstats::testing::random_lossy;

namespace {

ComplexMatrix beamsplitter() {
  ComplexMatrix u(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  u << s, s, s, -s;
  return u;
}

ComplexVector vec(std::initializer_list<Complex> xs) {
  ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (Complex x : xs) v(i++) = x;
  return v;
}

Occupation random_occupation(std::size_t m, int total, std::mt19937_64& rng) {
  std::vector<int> n(m, 0);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  for (int k = 0; k < total; ++k) ++n[pick(rng)];
  return Occupation(n);
}

}  // namespace

TEST_CASE("fock_amplitude") {
  CHECK(std::abs(fock_amplitude(ComplexMatrix::Identity(3, 3), {1, 0, 2}, {1, 0, 2}) - 1.0) < 1e-15);
  const ComplexMatrix u = beamsplitter();
  CHECK(std::abs(fock_amplitude(u, {1, 1}, {1, 1})) < 1e-15);
  CHECK(std::abs(std::norm(fock_amplitude(u, {2, 0}, {1, 1})) - 0.5) < 1e-15);
  CHECK_THROWS_AS(fock_amplitude(u, {2, 1}, {1, 1}), DimensionError);
  CHECK_THROWS_AS(fock_amplitude(0.5 * u, {1, 1}, {1, 1}), UnphysicalError);
}

TEST_CASE("generating function and vacuum marginals") {
  const ComplexMatrix u = beamsplitter();
  CHECK(std::abs(generating_function(u, {1, 1}, vec({1.0, 1.0})) - 1.0) < 1e-15);
  CHECK(std::abs(generating_function(u, {1, 1}, vec({0.0, 0.0}))) < 1e-15);
  CHECK(std::abs(generating_function(u, {1, 1}, vec({0.0, 1.0})) - 0.5) < 1e-15);

  CHECK(marginal_vacuum_prob(u, {1, 1}, {}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(marginal_vacuum_prob(u, {1, 1}, {0, 1}) < 1e-15);

  std::mt19937_64 rng(31);
  const ComplexMatrix u4 = haar_random_unitary(4, rng());
  const Occupation n{1, 1, 0, 0};
  double want = 0.0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; a + b <= 2; ++b) want += std::norm(fock_amplitude(u4, {0, a, b, 2 - a - b}, n));
  CHECK(std::abs(marginal_vacuum_prob(u4, n, {0}) - want) < 1e-13);
}

TEST_CASE("threshold_prob_fock golden values") {
  const FockExperiment hom(beamsplitter(), {1, 1});
  CHECK(hom.is_unitary());
  CHECK(threshold_prob_fock(hom, {1, 1}) < 1e-15);
  CHECK(std::abs(threshold_prob_fock(hom, {1, 0}) - 0.5) < 1e-15);
  CHECK(std::abs(threshold_prob_fock(hom, {0, 1}) - 0.5) < 1e-15);
  CHECK(threshold_prob_fock(hom, {0, 0}) == 0.0);

  const FockExperiment ztl(fourier_matrix(3), {1, 1, 1});
  CHECK(threshold_prob_fock(ztl, {1, 1, 0}) < 1e-15);
  CHECK(std::abs(threshold_prob_fock(ztl, {1, 1, 1}) - 1.0 / 3.0) < 1e-14);

  // n=(1,2,0), d=(0,1,1) with balanced loss: (2/9)(eta^3 + 2 eta^2 (1-eta))
  for (double eta : {1.0, 0.9, 0.5, 0.3}) {
    const FockExperiment e(std::sqrt(eta) * fourier_matrix(3), {1, 2, 0});
    const double want = 2.0 / 9.0 * (eta * eta * eta + 2.0 * eta * eta * (1.0 - eta));
    CHECK(std::abs(threshold_prob_fock(e, {0, 1, 1}) - want) < 1e-12);
    CHECK(std::abs(oracles::threshold_enum_fock(e, {0, 1, 1}) - want) < 1e-12);
  }
}

TEST_CASE("more clicks than photons is exactly zero") {
  std::mt19937_64 rng(32);
  const FockExperiment e(random_lossy(4, rng), {2, 0, 0, 0});
  CHECK(threshold_prob_fock(e, {1, 1, 1, 0}) == 0.0);
  CHECK(threshold_prob_fock(e, {1, 1, 1, 1}) == 0.0);
  CHECK(threshold_prob_fock(e, {1, 1, 0, 0}) > 0.0);
}

TEST_CASE("fock distribution normalization and oracle agreement") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t m = 2 + trial % 4;
    const bool lossless = trial % 3 == 0;
    const ComplexMatrix t = lossless ? haar_random_unitary(m, rng()) : random_lossy(m, rng);
    const FockExperiment e(t, random_occupation(m, 1 + trial % 4, rng));
    const ClickDistribution dist = fock_distribution(e);
    CHECK(std::abs(dist.total() - 1.0) < 1e-9);
    const ClickDistribution ref = oracles::threshold_enum_distribution(e);
    for (std::size_t i = 0; i < dist.probabilities.size(); ++i)
      CHECK(std::abs(dist.probabilities[i] - ref.probabilities[i]) < 1e-9);
  }
  const ClickDistribution hom = fock_distribution(FockExperiment(beamsplitter(), {1, 1}));
  CHECK(hom[{0, 0}] == 0.0);
  CHECK(hom[{1, 0}] == doctest::Approx(0.5));
  CHECK(hom[{0, 1}] == doctest::Approx(0.5));
  CHECK(hom[{1, 1}] < 1e-15);
  const ClickDistribution none = fock_distribution(FockExperiment(random_lossy(3, rng), {0, 0, 0}));
  CHECK(none[{0, 0, 0}] == doctest::Approx(1.0));

  const FockExperiment lossy3(std::sqrt(0.6) * fourier_matrix(3), {1, 1, 1});
  const ClickDistribution d3 = fock_distribution(lossy3);
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(std::abs(d3.probabilities[i] - oracles::threshold_enum_fock(lossy3, d3.pattern(i))) < 1e-9);

  DistributionOptions threaded;
  threaded.threads = 3;
  CHECK(fock_distribution(lossy3, threaded).probabilities == d3.probabilities);
  DistributionOptions tiny;
  tiny.mode_cap = 2;
  CHECK_THROWS_AS(fock_distribution(lossy3, tiny), CapExceededError);
}

TEST_CASE("zero transmission law for Fourier-3") {
  const FockExperiment ztl(fourier_matrix(3), {1, 1, 1});
  const ClickDistribution d = fock_distribution(ztl);
  // (1,1,1) through Fourier-3: only outputs with sum of mode labels = 0 mod 3 survive
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b) {
      const Occupation m{a, b, 3 - a - b};
      if ((b + 2 * (3 - a - b)) % 3 != 0) CHECK(std::norm(fock_amplitude(fourier_matrix(3), m, {1, 1, 1})) < 1e-10);
    }
  CHECK(d[{1, 1, 0}] < 1e-10);
  CHECK(d[{0, 1, 1}] < 1e-10);
  CHECK(d[{1, 0, 1}] < 1e-10);
}

TEST_CASE("marginal threshold probabilities") {
  const FockExperiment hom(beamsplitter(), {1, 1});
  CHECK(std::abs(marginal_threshold_prob_fock(hom, {0}, {}) - 0.5) < 1e-14);
  CHECK(std::abs(marginal_threshold_prob_fock(hom, {}, {}) - 1.0) < 1e-14);
  CHECK(std::abs(marginal_threshold_prob_fock(hom, {0}, {1}) - threshold_prob_fock(hom, {1, 0})) < 1e-14);
  CHECK_THROWS_AS(marginal_threshold_prob_fock(hom, {0}, {0}), DimensionError);

  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t m = 3 + trial % 2;
    const FockExperiment e(random_lossy(m, rng), random_occupation(m, 3, rng));
    const ClickDistribution dist = fock_distribution(e);
    // C = {0}, V = {1}, rest marginalised
    double want = 0.0;
    for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
      const ClickPattern d = dist.pattern(i);
      if (d.clicked(0) && !d.clicked(1)) want += dist.probabilities[i];
    }
    CHECK(std::abs(marginal_threshold_prob_fock(e, {0}, {1}) - want) < 1e-10);
    const ClickPattern full = dist.pattern(5);
    CHECK(std::abs(marginal_threshold_prob_fock(e, full.clicks(), full.vacuums()) - dist.probabilities[5]) < 1e-12);
  }
}

TEST_CASE("balanced loss commutes with the interferometer") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix u = haar_random_unitary(3, rng());
    const double eta = 0.3 + 0.1 * trial;
    const Occupation n = random_occupation(3, 3, rng);
    const FockExperiment e(std::sqrt(eta) * u, n);
    for (std::uint64_t k = 0; k < 8; ++k) {
      const ClickPattern d = ClickPattern::from_index(k, 3);
      CHECK(std::abs(threshold_prob_fock(e, d) - oracles::threshold_enum_balanced_loss(u, eta, n, d)) < 1e-9);
    }
  }
}

TEST_CASE("enumeration oracle ignores the choice of dilation") {
  std::mt19937_64 rng(36);
  const ComplexMatrix t = random_lossy(3, rng);
  const ComplexMatrix d1 = unitary_dilation(t);
  // rotate the environment modes by a unitary: still a dilation of t
  ComplexMatrix v = ComplexMatrix::Identity(6, 6);
  v.bottomRightCorner(3, 3) = haar_random_unitary(3, 99);
  const ComplexMatrix d2 = v * d1;
  const Occupation n{1, 2, 0};
  for (std::uint64_t k = 0; k < 8; ++k) {
    const ClickPattern d = ClickPattern::from_index(k, 3);
    CHECK(std::abs(oracles::threshold_enum_fock(d1, 3, n, d) - oracles::threshold_enum_fock(d2, 3, n, d)) < 1e-10);
  }
}

TEST_CASE("channel validation") {
  CHECK_THROWS_AS(FockExperiment(1.2 * fourier_matrix(2), {1, 0}), InvalidChannelError);
  CHECK_THROWS_AS(FockExperiment(fourier_matrix(2), {1, 0, 0}), DimensionError);
  const FockExperiment e(fourier_matrix(2), {1, 0});
  CHECK_THROWS_AS(threshold_prob_fock(e, {1, 0, 0}), DimensionError);
}
