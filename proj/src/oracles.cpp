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

#include "clickstats/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "clickstats/compensated_sum.hpp"
#include "clickstats/errors.hpp"
#include "clickstats/matfunc.hpp"

namespace clickstats::oracles {

namespace {

void cap(bool exceeded, const std::string& what) {
  if (exceeded) throw CapExceededError("oracle size cap exceeded: " + what);
}

// Calls visit(pattern) for every length-`modes` occupation with `total` photons.
void for_each_pattern(std::size_t modes, int total, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> pattern(modes, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t mode, int remaining) {
    if (mode + 1 == modes) {
      pattern[mode] = remaining;
      visit(pattern);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      pattern[mode] = k;
      rec(mode + 1, remaining - k);
    }
  };
  if (modes == 0) {
    if (total == 0) visit(pattern);
    return;
  }
  rec(0, total);
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// |<out| U |in>|^2 with the permanent taken over all permutations.
double transition_probability(const ComplexMatrix& u, const std::vector<int>& out, const std::vector<int>& in) {
  std::vector<Eigen::Index> rows, cols;
  double norm = 1.0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    for (int r = 0; r < out[j]; ++r) rows.push_back(static_cast<Eigen::Index>(j));
    norm *= factorial(out[j]);
  }
  for (std::size_t j = 0; j < in.size(); ++j) {
    for (int r = 0; r < in[j]; ++r) cols.push_back(static_cast<Eigen::Index>(j));
    norm *= factorial(in[j]);
  }
  ComplexMatrix sub(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = u(rows[i], cols[j]);
  }
  return std::norm(permanent_naive(sub)) / norm;
}

// Accumulates exact threshold and single-photon-projection distributions over
// the system modes of a dilated unitary.
void enumerate_dilated(const ComplexMatrix& dilation, std::size_t output_modes, const Occupation& n,
                       std::vector<CompensatedSum>* exact, std::vector<CompensatedSum>* approx) {
  const std::size_t k = static_cast<std::size_t>(dilation.rows());
  std::vector<int> input(k, 0);
  for (std::size_t j = 0; j < n.size(); ++j) input[j] = n[j];
  for_each_pattern(k, n.total(), [&](const std::vector<int>& out) {
    const double p = transition_probability(dilation, out, input);
    std::uint64_t code = 0;
    bool collision_free = true;
    for (std::size_t j = 0; j < output_modes; ++j) {
      code = (code << 1) | (out[j] > 0 ? 1U : 0U);
      collision_free = collision_free && out[j] <= 1;
    }
    if (exact) (*exact)[code] += p;
    if (approx && collision_free) (*approx)[code] += p;
  });
}

ClickDistribution to_distribution(std::size_t modes, const std::vector<CompensatedSum>& sums) {
  ClickDistribution d{modes, std::vector<double>(sums.size()), 0.0};
  for (std::size_t i = 0; i < sums.size(); ++i) d.probabilities[i] = sums[i].value();
  return d;
}

}  // namespace

Complex permanent_naive(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("permanent_naive needs a square matrix");
  cap(a.rows() > 9, "permanent_naive n <= 9");
  const int n = static_cast<int>(a.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Complex total(0.0);
  do {
    Complex term(1.0);
    for (int i = 0; i < n; ++i) term *= a(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Complex lhaf_reference(const ComplexMatrix& a, const ComplexVector& gamma) {
  if (a.rows() != a.cols() || a.rows() != gamma.size()) throw DimensionError("lhaf_reference shape mismatch");
  cap(a.rows() > 8, "lhaf_reference 2m <= 8");
  const int n = static_cast<int>(a.rows());
  std::vector<bool> used(n, false);
  std::function<Complex()> rec = [&]() -> Complex {
    int first = 0;
    while (first < n && used[first]) ++first;
    if (first == n) return Complex(1.0);
    used[first] = true;
    Complex total = gamma(first) * rec();
    for (int j = first + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      total += a(first, j) * rec();
      used[j] = false;
    }
    used[first] = false;
    return total;
  };
  return rec();
}

double threshold_enum_fock(const ComplexMatrix& dilation, std::size_t output_modes, const Occupation& n,
                           const ClickPattern& d) {
  cap(n.total() > 5, "threshold_enum_fock N <= 5");
  cap(output_modes > 6, "threshold_enum_fock M_out <= 6");
  if (d.size() != output_modes) throw DimensionError("threshold_enum_fock pattern length");
  if (dilation.rows() != dilation.cols() ||
      static_cast<std::size_t>(dilation.rows()) != output_modes + n.size()) {
    throw DimensionError("threshold_enum_fock: dilation must be (M_out + M_in) square");
  }
  std::vector<CompensatedSum> exact(std::size_t{1} << output_modes);
  enumerate_dilated(dilation, output_modes, n, &exact, nullptr);
  return exact[d.index()].value();
}

double threshold_enum_fock(const FockExperiment& exp, const ClickPattern& d) {
  cap(exp.photons() > 5, "threshold_enum_fock N <= 5");
  cap(exp.output_modes() > 6, "threshold_enum_fock M_out <= 6");
  return threshold_enum_fock(unitary_dilation(exp.transmission()), exp.output_modes(), exp.input(), d);
}

double threshold_enum_balanced_loss(const ComplexMatrix& u, double eta, const Occupation& n, const ClickPattern& d) {
  cap(n.total() > 5, "threshold_enum_balanced_loss N <= 5");
  cap(u.rows() > 6, "threshold_enum_balanced_loss M <= 6");
  if (u.rows() != u.cols() || n.size() != static_cast<std::size_t>(u.cols()) || d.size() != n.size()) {
    throw DimensionError("threshold_enum_balanced_loss shape mismatch");
  }
  const std::size_t m = n.size();
  CompensatedSum total;
  // Enumerate surviving photon numbers k_j <= n_j.
  std::vector<int> kept(m, 0);
  std::function<void(std::size_t, double)> rec = [&](std::size_t mode, double weight) {
    if (mode == m) {
      int survivors = std::accumulate(kept.begin(), kept.end(), 0);
      CompensatedSum p;
      for_each_pattern(m, survivors, [&](const std::vector<int>& out) {
        for (std::size_t j = 0; j < m; ++j) {
          if ((out[j] > 0) != d.clicked(j)) return;
        }
        p += transition_probability(u, out, kept);
      });
      total += weight * p.value();
      return;
    }
    for (int k = 0; k <= n[mode]; ++k) {
      kept[mode] = k;
      const double binom = factorial(n[mode]) / (factorial(k) * factorial(n[mode] - k));
      rec(mode + 1, weight * binom * std::pow(eta, k) * std::pow(1.0 - eta, n[mode] - k));
    }
  };
  rec(0, 1.0);
  return total.value();
}

double threshold_incexc_gaussian(const GaussianState& state, const ClickPattern& d) {
  cap(state.modes() > 8, "threshold_incexc_gaussian M <= 8");
  if (d.size() != state.modes()) throw DimensionError("threshold_incexc_gaussian pattern length");
  const ModeSet c = d.clicks();
  const ModeSet v = d.vacuums();
  CompensatedSum total;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << c.size()); ++mask) {
    std::vector<std::size_t> vac(v.begin(), v.end());
    int size = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        vac.push_back(c[i]);
        ++size;
      }
    }
    std::sort(vac.begin(), vac.end());
    const double p = vacuum_prob_marginal(state, ModeSet(std::move(vac)));
    total += (size % 2 == 0) ? p : -p;
  }
  return total.value();
}

Complex lhaf_from_ltor_series(const ComplexMatrix& o, const ComplexVector& gamma, std::size_t ell) {
  if (o.rows() != o.cols() || o.rows() % 2 != 0 || static_cast<std::size_t>(o.rows()) != 2 * ell) {
    throw DimensionError("lhaf_from_ltor_series: ell must equal the mode count of O");
  }
  cap(ell > 3, "lhaf_from_ltor_series ell <= 3");
  const std::size_t nodes = ell + 1;
  constexpr double kStep = 0.02;
  Eigen::MatrixXd vandermonde(nodes, nodes);
  Eigen::VectorXd samples(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double eta = kStep * static_cast<double>(i + 1);
    for (std::size_t j = 0; j < nodes; ++j) vandermonde(i, j) = std::pow(eta, static_cast<double>(j));
    samples(i) = ltor(eta * o, std::sqrt(eta) * gamma) / std::pow(eta, static_cast<double>(ell));
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(vandermonde);
  if (lu.rcond() < 1e-14) throw NumericalError("lhaf_from_ltor_series: ill-conditioned node set");
  const Eigen::VectorXd coeffs = lu.solve(samples);
  return Complex(coeffs(0));
}

ClickDistribution approx_model_distribution(const FockExperiment& exp) {
  cap(exp.photons() > 5, "approx_model_distribution N <= 5");
  cap(exp.output_modes() > 12, "approx_model_distribution M_out <= 12");
  std::vector<CompensatedSum> approx(std::size_t{1} << exp.output_modes());
  enumerate_dilated(unitary_dilation(exp.transmission()), exp.output_modes(), exp.input(), nullptr, &approx);
  return to_distribution(exp.output_modes(), approx);
}

ClickDistribution threshold_enum_distribution(const FockExperiment& exp) {
  cap(exp.photons() > 5, "threshold_enum_distribution N <= 5");
  cap(exp.output_modes() > 12, "threshold_enum_distribution M_out <= 12");
  std::vector<CompensatedSum> exact(std::size_t{1} << exp.output_modes());
  enumerate_dilated(unitary_dilation(exp.transmission()), exp.output_modes(), exp.input(), &exact, nullptr);
  return to_distribution(exp.output_modes(), exact);
}

}  // namespace clickstats::oracles
