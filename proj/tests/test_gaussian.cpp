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
#include "clickstats/gaussian.hpp"
#include "clickstats/oracles.hpp"
#include "test_support.hpp"

using namespace clickstats;
using clickstats::testing::random_gaussian;
using clickstats::testing::random_lossy;

namespace {

void check_invariants(const GaussianState& s) {
  CHECK_NOTHROW(check_physical(s));
  const ComplexMatrix x = block_swap(s.modes());
  CHECK((x * s.sigma().conjugate() * x - s.sigma()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((s.alpha().conjugate() - x * s.alpha()).cwiseAbs().maxCoeff() < 1e-12);
}

double factorial(int k) { return std::tgamma(k + 1.0); }

}  // namespace

TEST_CASE("vacuum") {
  const GaussianState v = vacuum_state(1);
  CHECK(v.sigma() == ComplexMatrix::Identity(2, 2));
  CHECK(v.alpha() == ComplexVector::Zero(2));
  const ReducedForm r = reduce(vacuum_state(3));
  CHECK(r.o.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.gamma.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.p0 == doctest::Approx(1.0));
  CHECK(threshold_prob_gaussian(vacuum_state(2), {0, 0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(vacuum_state(0), DimensionError);
  const ClickDistribution d = gaussian_distribution(vacuum_state(3));
  CHECK(d[{0, 0, 0}] == doctest::Approx(1.0));
  CHECK(d.total() == doctest::Approx(1.0));
}

TEST_CASE("coherent states") {
  const Complex beta(0.8, -0.4);
  const GaussianState c = displace(vacuum_state(1), 0, beta);
  const double b2 = std::norm(beta);
  CHECK(std::abs(reduce(c).p0 - std::exp(-b2)) < 1e-14);
  CHECK(std::abs(threshold_prob_gaussian(c, {1}) + std::expm1(-b2)) < 1e-14);
  CHECK(std::abs(oracles::threshold_incexc_gaussian(c, {1}) + std::expm1(-b2)) < 1e-14);
  const ReducedForm r = reduce(c);
  CHECK(std::abs(r.gamma(0) - std::conj(beta)) < 1e-15);
  CHECK(std::abs(r.gamma(1) - beta) < 1e-15);
  for (int k = 0; k <= 4; ++k) {
    const double want = std::exp(-b2) * std::pow(b2, k) / factorial(k);
    CHECK(std::abs(photon_number_prob(c, {k}) - want) < 1e-13);
  }
  CHECK(displace(vacuum_state(2), 1, 0.0).alpha() == vacuum_state(2).alpha());
  const GaussianState twice = displace(displace(vacuum_state(2), 1, beta), 1, Complex(0.1, 0.2));
  CHECK((twice.alpha() - displace(vacuum_state(2), 1, beta + Complex(0.1, 0.2)).alpha()).norm() < 1e-15);
  CHECK_THROWS_AS(displace(vacuum_state(2), 2, beta), DimensionError);

  // product of coherent states
  const Complex b2c(0.3, 0.9);
  const GaussianState pc = displace(displace(vacuum_state(2), 0, beta), 1, b2c);
  const ClickDistribution dist = gaussian_distribution(pc);
  const double q0 = -std::expm1(-std::norm(beta)), q1 = -std::expm1(-std::norm(b2c));
  CHECK(std::abs(dist[{1, 0}] - q0 * (1 - q1)) < 1e-14);
  CHECK(std::abs(dist[{1, 1}] - q0 * q1) < 1e-14);
  CHECK(std::abs(dist[{0, 0}] - (1 - q0) * (1 - q1)) < 1e-14);
}

TEST_CASE("attenuated coherent state stays coherent") {
  const Complex beta(0.7, 0.5);
  const double eta = 0.35;
  ComplexMatrix t(1, 1);
  t(0, 0) = std::sqrt(eta);
  const GaussianState s = apply_channel(displace(vacuum_state(1), 0, beta), t);
  CHECK(std::abs(s.alpha()(0) - std::sqrt(eta) * beta) < 1e-15);
  CHECK(std::abs(reduce(s).p0 - std::exp(-eta * std::norm(beta))) < 1e-14);
  const GaussianState id = apply_channel(s, ComplexMatrix::Identity(1, 1));
  CHECK((id.sigma() - s.sigma()).norm() < 1e-15);
  std::mt19937_64 rng(41);
  const GaussianState vac = apply_channel(vacuum_state(3), random_lossy(3, rng));
  CHECK((vac.sigma() - ComplexMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(apply_channel(vacuum_state(2), 1.3 * fourier_matrix(2)), InvalidChannelError);
  // a unitary preserves det(Sigma)
  const GaussianState sq = single_mode_squeezed(vacuum_state(2), 0, 0.4);
  const GaussianState rot = apply_channel(sq, fourier_matrix(2));
  CHECK(std::abs(rot.sigma().determinant() - sq.sigma().determinant()) < 1e-12);
}

TEST_CASE("two-mode squeezed vacuum") {
  CHECK((two_mode_squeezed(vacuum_state(2), 0, 1, 0.0).sigma() - ComplexMatrix::Identity(4, 4)).norm() == 0.0);
  const double t = 0.45;
  const GaussianState s = two_mode_squeezed(vacuum_state(2), 0, 1, t);
  const double nbar = std::sinh(t) * std::sinh(t);
  const double eps2 = std::tanh(t) * std::tanh(t);
  check_invariants(s);
  CHECK(std::abs(reduce(s).p0 - 1.0 / std::pow(std::cosh(t), 2)) < 1e-14);
  CHECK(std::abs(vacuum_prob_marginal(s, {0}) - 1.0 / (1.0 + nbar)) < 1e-14);
  CHECK(std::abs(1.0 - vacuum_prob_marginal(s, {1}) - eps2) < 1e-14);
  // heralding probability: click on mode 1, mode 0 ignored
  const double herald = threshold_prob_gaussian(s, {1, 1}) + threshold_prob_gaussian(s, {0, 1});
  CHECK(std::abs(herald - eps2) < 1e-14);
  const double p11 = 1.0 - 2.0 / (1.0 + nbar) + 1.0 / std::pow(std::cosh(t), 2);
  CHECK(std::abs(threshold_prob_gaussian(s, {1, 1}) - p11) < 1e-14);
  CHECK(std::abs(oracles::threshold_incexc_gaussian(s, {1, 1}) - p11) < 1e-14);
  CHECK(vacuum_prob_marginal(s, {}) == 1.0);
  CHECK(std::abs(vacuum_prob_marginal(s, {0, 1}) - reduce(s).p0) < 1e-15);
  CHECK_THROWS_AS(two_mode_squeezed(vacuum_state(2), 1, 1, t), DimensionError);
}

TEST_CASE("single-mode squeezed vacuum") {
  const double r = 0.6;
  CHECK((single_mode_squeezed(vacuum_state(1), 0, 0.0).sigma() - ComplexMatrix::Identity(2, 2)).norm() == 0.0);
  const GaussianState s = single_mode_squeezed(vacuum_state(1), 0, r);
  check_invariants(s);
  CHECK(std::abs(reduce(s).p0 - 1.0 / std::cosh(r)) < 1e-14);
  for (int k : {1, 3, 5}) CHECK(photon_number_prob(s, {k}) < 1e-12);
  // p(2) = tanh^2 r / (2 cosh r)
  CHECK(std::abs(photon_number_prob(s, {2}) - std::pow(std::tanh(r), 2) / (2.0 * std::cosh(r))) < 1e-13);
}

TEST_CASE("randomised circuits stay physical") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = 1 + trial % 4;
    GaussianState s = vacuum_state(m);
    for (int depth = 0; depth < 6; ++depth) {
      switch ((trial + depth) % 4) {
        case 0: s = single_mode_squeezed(s, depth % m, u(rng)); break;
        case 1: s = displace(s, depth % m, Complex(u(rng), u(rng))); break;
        case 2: if (m > 1) s = two_mode_squeezed(s, 0, m - 1, u(rng)); break;
        default: s = apply_channel(s, random_lossy(m, rng)); break;
      }
      check_invariants(s);
    }
  }
}

TEST_CASE("physicality checks name the invariant") {
  ComplexMatrix sigma = ComplexMatrix::Identity(2, 2);
  sigma(0, 0) = -0.5;
  sigma(1, 1) = -0.5;
  try {
    check_physical(GaussianState(sigma, ComplexVector::Zero(2)));
    FAIL("expected an exception");
  } catch (const UnphysicalError& e) {
    CHECK(std::string(e.what()).find("positive definite") != std::string::npos);
  }
  ComplexVector alpha(2);
  alpha << 1.0, 2.0;
  CHECK_THROWS_AS(reduce(GaussianState(ComplexMatrix::Identity(2, 2), alpha)), UnphysicalError);
  CHECK_THROWS_AS(GaussianState(ComplexMatrix::Identity(3, 3), ComplexVector::Zero(3)), DimensionError);
  // thermal-like Sigma below vacuum: allowed, flagged
  const PhysicalityReport rep = check_physical(GaussianState(0.5 * ComplexMatrix::Identity(2, 2), ComplexVector::Zero(2)));
  CHECK_FALSE(rep.satisfies_uncertainty);
  CHECK(check_physical(vacuum_state(2)).satisfies_uncertainty);
}

TEST_CASE("threshold probabilities match inclusion/exclusion over vacuum marginals") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = 1 + trial % 4;
    const GaussianState s = random_gaussian(m, rng);
    const ClickDistribution dist = gaussian_distribution(s);
    CHECK(std::abs(dist.total() - 1.0) < 1e-9);
    for (std::size_t i = 0; i < dist.probabilities.size(); ++i)
      CHECK(std::abs(dist.probabilities[i] - oracles::threshold_incexc_gaussian(s, dist.pattern(i))) < 1e-9);
    CHECK(std::abs(dist.probabilities[0] - vacuum_prob_marginal(s, ModeSet::all(m))) < 1e-12);
  }
  DistributionOptions threaded;
  threaded.threads = 4;
  const GaussianState s = random_gaussian(4, rng);
  CHECK(gaussian_distribution(s, threaded).probabilities == gaussian_distribution(s).probabilities);
}

TEST_CASE("photon-number probabilities coarse-grain to click probabilities") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 3; ++trial) {
    const GaussianState s = random_gaussian(2, rng, 0.15);
    const ReducedForm r = reduce(s);
    const int cutoff = 10;
    double by_pattern[4] = {0, 0, 0, 0};
    double total = 0.0;
    for (int a = 0; a <= cutoff; ++a)
      for (int b = 0; a + b <= cutoff; ++b) {
        const double p = photon_number_prob(r, {a, b});
        by_pattern[(a > 0 ? 2 : 0) + (b > 0 ? 1 : 0)] += p;
        total += p;
      }
    CHECK(total <= 1.0 + 1e-12);
    CHECK(total > 1.0 - 1e-7);
    for (std::uint64_t k = 0; k < 4; ++k)
      CHECK(std::abs(threshold_prob_gaussian(r, ClickPattern::from_index(k, 2)) - by_pattern[k]) < 1e-7);
  }
}

TEST_CASE("photon-number normalization grows with the cutoff") {
  std::mt19937_64 rng(45);
  const ReducedForm r = reduce(random_gaussian(1, rng, 0.4));
  double last = 0.0, acc = 0.0;
  for (int k = 0; k <= 12; ++k) {
    acc += photon_number_prob(r, {k});
    CHECK(acc >= last);
    last = acc;
  }
  CHECK(acc > 1.0 - 1e-8);
  CHECK_THROWS_AS(photon_number_prob(r, {5}, 4), CapExceededError);
  CHECK(photon_number_prob(reduce(vacuum_state(2)), {0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("determinant identity for complementary blocks") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t m = 4;
    const GaussianState s = random_gaussian(m, rng);
    const ModeSet w{0, 2}, y{1, 3};
    const ComplexMatrix inv = s.sigma().inverse();
    const Complex lhs = select_mode_pairs(s.sigma(), w, m).determinant();
    const Complex rhs = s.sigma().determinant() * select_mode_pairs(inv, y, m).determinant();
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
  }
}

TEST_CASE("scattershot O matches the explicit squeezer circuit") {
  std::mt19937_64 rng(47);
  const double eps = 0.3;
  const ComplexMatrix t = random_lossy(2, rng);
  // modes: outputs 0,1 then heralds 2,3; TMSV pairs (output j, herald j)
  GaussianState s = vacuum_state(4);
  for (std::size_t j = 0; j < 2; ++j) s = two_mode_squeezed(s, j, j + 2, std::atanh(eps));
  ComplexMatrix big = ComplexMatrix::Identity(4, 4);
  big.topLeftCorner(2, 2) = t;
  s = apply_channel(s, big);
  const ComplexMatrix o = scattershot_O(t, eps);
  CHECK((o - reduce(s).o).cwiseAbs().maxCoeff() < 1e-12);
  const ComplexMatrix x = block_swap(4);
  CHECK((x * o.conjugate() * x - o).cwiseAbs().maxCoeff() < 1e-15);
  const ComplexMatrix ou = scattershot_O(fourier_matrix(2), 0.2);
  CHECK(ou.block(2, 2, 2, 2).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(scattershot_O(t, 1e-9).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(scattershot_O(t, 1.0), DimensionError);
}
