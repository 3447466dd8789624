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


#include "clickstats/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "clickstats/errors.hpp"
#include "clickstats/fock.hpp"
#include "clickstats/matfunc.hpp"
#include "clickstats/oracles.hpp"
#include "parallel.hpp"

namespace clickstats::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

[[noreturn]] void schema(const std::string& what) { throw ParseError("spec: " + what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) schema(std::string(what) + " must be a number");
  return j.get<double>();
}

std::size_t index(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) schema(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

Complex complex_value(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  schema("complex values are numbers or [re, im] pairs");
}

ComplexMatrix matrix_value(const json& j) {
  if (!j.is_array()) schema("matrices are row-major nested arrays");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0) : 0;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) schema("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_value(j[r][c]);
  }
  return m;
}

ComplexVector vector_value(const json& j) {
  if (!j.is_array()) schema("vectors are arrays");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_value(j[i]);
  return v;
}

Occupation occupation_value(const json& j) {
  if (!j.is_array()) schema("occupations are integer arrays");
  std::vector<int> n;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<long long>() < 0) schema("occupation entries must be non-negative integers");
    n.push_back(x.get<int>());
  }
  return Occupation(std::move(n));
}

ClickPattern pattern_value(const json& j) {
  if (j.is_string()) {
    try {
      return ClickPattern::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      schema(e.what());
    }
  }
  if (!j.is_array()) schema("outcome must be a 0/1 array or string");
  std::vector<std::uint8_t> bits;
  for (const auto& x : j) {
    if (!x.is_number_integer() || (x.get<int>() != 0 && x.get<int>() != 1)) schema("outcome entries must be 0 or 1");
    bits.push_back(static_cast<std::uint8_t>(x.get<int>()));
  }
  return ClickPattern(std::move(bits));
}

void check_mode(std::size_t mode, std::size_t modes) {
  if (mode >= modes) schema("mode " + std::to_string(mode) + " outside the declared " + std::to_string(modes) + " modes");
}

// Beamsplitter on (i, j): [[cos, -e^{-i phi} sin], [e^{i phi} sin, cos]].
ComplexMatrix circuit_op(const json& op, std::size_t modes) {
  const std::string name = field(op, "op").get<std::string>();
  const auto m = static_cast<Eigen::Index>(modes);
  ComplexMatrix g = ComplexMatrix::Identity(m, m);
  if (name == "beamsplitter") {
    const json& pair = field(op, "modes");
    if (!pair.is_array() || pair.size() != 2) schema("beamsplitter needs two modes");
    const std::size_t i = index(pair[0], "mode"), j = index(pair[1], "mode");
    check_mode(i, modes);
    check_mode(j, modes);
    if (i == j) schema("beamsplitter modes must differ");
    const double theta = op.contains("theta") ? number(op["theta"], "theta") : std::numbers::pi / 4;
    const double phi = op.contains("phi") ? number(op["phi"], "phi") : 0.0;
    const Complex e = std::polar(1.0, phi);
    g(i, i) = std::cos(theta);
    g(i, j) = -std::conj(e) * std::sin(theta);
    g(j, i) = e * std::sin(theta);
    g(j, j) = std::cos(theta);
  } else if (name == "phase") {
    const std::size_t i = index(field(op, "mode"), "mode");
    check_mode(i, modes);
    g(i, i) = std::polar(1.0, number(field(op, "phi"), "phi"));
  } else if (name == "loss") {
    const std::size_t i = index(field(op, "mode"), "mode");
    check_mode(i, modes);
    g(i, i) = std::sqrt(number(field(op, "transmission"), "transmission"));
  } else if (name == "fourier") {
    g = fourier_matrix(modes);
  } else {
    schema("unknown circuit op '" + name + "'");
  }
  return g;
}

ComplexMatrix channel_value(const json& j, ExperimentSpec& spec, const Options& options) {
  if (!j.is_object()) schema("channel must be an object");
  ComplexMatrix t;
  if (j.contains("matrix")) {
    t = matrix_value(j["matrix"]);
  } else if (j.contains("fourier")) {
    t = fourier_matrix(index(j["fourier"], "fourier"));
  } else if (j.contains("haar")) {
    spec.seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : options.seed;
    spec.seed_used = true;
    t = haar_random_unitary(index(j["haar"], "haar"), spec.seed);
  } else if (j.contains("ops")) {
    const std::size_t modes = index(field(j, "modes"), "modes");
    t = ComplexMatrix::Identity(static_cast<Eigen::Index>(modes), static_cast<Eigen::Index>(modes));
    if (!j["ops"].is_array()) schema("ops must be an array");
    for (const auto& op : j["ops"]) t = circuit_op(op, modes) * t;
  } else {
    schema("channel needs one of matrix, fourier, haar, ops");
  }
  if (j.contains("transmission")) t *= std::sqrt(number(j["transmission"], "transmission"));
  if (t.rows() == 0 || t.cols() == 0) schema("channel must have at least one mode");
  return t;
}

GaussianState gaussian_input(const json& j) {
  if (j.contains("sigma")) {
    ComplexMatrix sigma = matrix_value(j["sigma"]);
    ComplexVector alpha = j.contains("alpha") ? vector_value(j["alpha"]) : ComplexVector::Zero(sigma.rows());
    if (sigma.rows() != sigma.cols() || sigma.rows() % 2 || sigma.rows() == 0 || alpha.size() != sigma.rows()) {
      schema("sigma must be 2M x 2M and alpha length 2M");
    }
    return GaussianState(std::move(sigma), std::move(alpha));
  }
  const std::size_t modes = index(field(j, "modes"), "modes");
  if (modes == 0) schema("a Gaussian state needs at least one mode");
  GaussianState s = vacuum_state(modes);
  if (!j.contains("ops")) return s;
  if (!j["ops"].is_array()) schema("ops must be an array");
  for (const auto& op : j["ops"]) {
    const std::string name = field(op, "op").get<std::string>();
    if (name == "displace") {
      const std::size_t i = index(field(op, "mode"), "mode");
      check_mode(i, modes);
      s = displace(s, i, complex_value(field(op, "beta")));
    } else if (name == "squeeze") {
      const std::size_t i = index(field(op, "mode"), "mode");
      check_mode(i, modes);
      s = single_mode_squeezed(s, i, number(field(op, "r"), "r"));
    } else if (name == "tmsv") {
      const json& pair = field(op, "modes");
      if (!pair.is_array() || pair.size() != 2) schema("tmsv needs two modes");
      const std::size_t a = index(pair[0], "mode"), b = index(pair[1], "mode");
      check_mode(a, modes);
      check_mode(b, modes);
      if (a == b) schema("tmsv modes must differ");
      s = two_mode_squeezed(s, a, b, number(field(op, "t"), "t"));
    } else {
      schema("unknown state op '" + name + "'");
    }
  }
  return s;
}

std::size_t output_modes(const ExperimentSpec& spec) {
  if (spec.has_channel) return static_cast<std::size_t>(spec.channel.rows());
  return spec.state ? spec.state->modes() : 0;
}

std::string occupation_label(const Occupation& n) {
  std::string s;
  for (std::size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
  return s;
}

std::string csv_field(const std::string& s) {
  return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Tolerances tolerances_for(const Options& options) {
  Tolerances tol;
  if (options.tolerance) {
    tol.hermitian = *options.tolerance;
    tol.singular_value = *options.tolerance;
  }
  return tol;
}

ExperimentSpec parse_spec(const std::string& text, const Options& options) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  ExperimentSpec spec;
  try {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "fock") spec.kind = Kind::fock;
    else if (kind == "gaussian") spec.kind = Kind::gaussian;
    else schema("kind must be 'fock' or 'gaussian'");

    const std::string query = j.contains("query") ? j["query"].get<std::string>() : "probability";
    if (query == "probability") spec.query = Query::probability;
    else if (query == "distribution") spec.query = Query::distribution;
    else if (query == "photon_number") spec.query = Query::photon_number;
    else schema("query must be probability, distribution or photon_number");

    if (j.contains("channel")) {
      spec.channel = channel_value(j["channel"], spec, options);
      spec.has_channel = true;
    }
    const json& input = field(j, "input");
    if (spec.kind == Kind::fock) {
      if (!spec.has_channel) schema("fock specs need a channel");
      spec.occupation = occupation_value(field(input, "occupation"));
      if (spec.occupation.size() != static_cast<std::size_t>(spec.channel.cols())) {
        schema("occupation length must equal the channel's input mode count");
      }
    } else {
      spec.state = gaussian_input(input);
      if (spec.has_channel && static_cast<std::size_t>(spec.channel.cols()) != spec.state->modes()) {
        schema("channel input mode count must equal the state's mode count");
      }
    }
    if (j.contains("modes") && index(j["modes"], "modes") != output_modes(spec)) {
      schema("declared mode count does not match the experiment");
    }
    if (j.contains("outcome")) {
      spec.outcome = pattern_value(j["outcome"]);
      if (spec.outcome->size() != output_modes(spec)) schema("outcome length must equal the output mode count");
    }
    if (spec.query == Query::probability && !spec.outcome) schema("probability queries need an outcome");
    if (spec.query == Query::photon_number) {
      spec.photons = occupation_value(field(j, "photons"));
      if (spec.photons->size() != output_modes(spec)) schema("photons length must equal the output mode count");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("spec: ") + e.what());
  }
  return spec;
}

ExperimentSpec load_spec(const std::string& path, const Options& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str(), options);
}

void validate(const ExperimentSpec& spec, const Options& options) {
  const Tolerances tol = tolerances_for(options);
  if (spec.has_channel) check_channel(spec.channel, tol);
  if (spec.kind == Kind::gaussian) {
    check_physical(*spec.state, tol);
    if (spec.has_channel) check_physical(apply_channel(*spec.state, spec.channel, tol), tol);
  } else if (spec.query == Query::photon_number && unitarity_deviation(spec.channel) >= kUnitaryFastPathThreshold) {
    throw UnphysicalError("photon-number queries on Fock inputs need a unitary channel");
  }
}

RunReport compute(const ExperimentSpec& spec, const Options& options) {
  validate(spec, options);
  const Tolerances tol = tolerances_for(options);
  const auto start = Clock::now();
  RunReport report;
  report.command = "compute";
  report.threads = options.threads;
  if (spec.seed_used) report.seed = spec.seed;
  DistributionOptions dist_options;
  dist_options.threads = options.threads;

  if (spec.kind == Kind::fock) {
    const FockExperiment exp(spec.channel, spec.occupation, tol);
    report.path = exp.is_unitary() ? "ubrs" : "brs";
    switch (spec.query) {
      case Query::probability: {
        const auto e = threshold_prob_fock_evaluate(exp, *spec.outcome);
        report.results.push_back({spec.outcome->to_string(), e.value});
        report.max_term = e.max_term;
        report.selected_indices = spec.outcome->clicks().indices();
        break;
      }
      case Query::distribution: {
        const ClickDistribution d = fock_distribution(exp, dist_options);
        for (std::size_t i = 0; i < d.probabilities.size(); ++i)
          report.results.push_back({d.pattern(i).to_string(), d.probabilities[i]});
        report.max_term = d.max_term;
        break;
      }
      case Query::photon_number: {
        report.path = "permanent";
        const Occupation& m = *spec.photons;
        const double p = m.total() == exp.photons() ? std::norm(fock_amplitude(spec.channel, m, spec.occupation, tol)) : 0.0;
        report.results.push_back({occupation_label(m), clip_probability(p, "photon_number")});
        break;
      }
    }
  } else {
    const GaussianState state = spec.has_channel ? apply_channel(*spec.state, spec.channel, tol) : *spec.state;
    const ReducedForm reduced = reduce(state, tol);
    const std::size_t modes = state.modes();
    report.path = "ltor";
    switch (spec.query) {
      case Query::probability: {
        const auto e = threshold_prob_gaussian_evaluate(reduced, *spec.outcome, options.threads, tol);
        report.results.push_back({spec.outcome->to_string(), e.value});
        report.max_term = e.max_term;
        for (std::size_t c : spec.outcome->clicks()) report.selected_indices.push_back(c);
        for (std::size_t c : spec.outcome->clicks()) report.selected_indices.push_back(c + modes);
        break;
      }
      case Query::distribution: {
        const ClickDistribution d = gaussian_distribution(state, dist_options, tol);
        for (std::size_t i = 0; i < d.probabilities.size(); ++i)
          report.results.push_back({d.pattern(i).to_string(), d.probabilities[i]});
        report.max_term = d.max_term;
        break;
      }
      case Query::photon_number: {
        report.path = "lhaf";
        report.results.push_back({occupation_label(*spec.photons),
                                  photon_number_prob(reduced, *spec.photons, kDefaultPhotonCutoff, tol)});
        break;
      }
    }
  }
  report.runtime_ms = elapsed_ms(start);
  return report;
}

void write_report(std::ostream& out, const RunReport& report, Format format) {
  if (format == Format::csv) {
    out << "outcome,probability,max_term,path\n";
    for (const auto& r : report.results) {
      out << csv_field(r.label) << ',' << format_double(r.probability) << ',' << format_double(report.max_term) << ','
          << report.path << '\n';
    }
    return;
  }
  json j;
  j["command"] = report.command;
  j["results"] = json::array();
  for (const auto& r : report.results) j["results"].push_back({{"outcome", r.label}, {"probability", r.probability}});
  j["diagnostics"] = {{"max_term", report.max_term},
                      {"runtime_ms", report.runtime_ms},
                      {"path", report.path},
                      {"selected_indices", report.selected_indices}};
  j["seed"] = report.seed ? json(*report.seed) : json(nullptr);
  j["threads"] = report.threads;
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Golden suite

SuiteKernels SuiteKernels::library() {
  return {[](const ComplexMatrix& a) { return clickstats::ubrs(a); },
          [](const ComplexMatrix& a, const ComplexMatrix& e) { return clickstats::brs(a, e); },
          [](const ComplexMatrix& o, const ComplexVector& g) { return clickstats::ltor(o, g); }};
}

namespace {

ComplexMatrix hom_beamsplitter() {
  ComplexMatrix u(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  u << s, s, s, -s;
  return u;
}

struct Deviation {
  double worst = 0.0;
  std::ostringstream detail;
  void add(const std::string& what, double got, double want) {
    worst = std::max(worst, std::abs(got - want));
    detail << what << '=' << format_double(got) << " (want " << format_double(want) << "); ";
  }
};

SuiteCheck finish(std::string name, Deviation& dev, double tolerance) {
  return {std::move(name), dev.worst, tolerance, dev.worst < tolerance, dev.detail.str()};
}

}  // namespace

std::vector<SuiteCheck> run_golden_suite(const SuiteKernels& k, std::optional<double> tolerance) {
  auto tol = [&](double t) { return tolerance.value_or(t); };
  std::vector<SuiteCheck> checks;
  const ComplexMatrix bs = hom_beamsplitter();
  const ComplexMatrix f3 = fourier_matrix(3);

  {  // lossless HOM
    Deviation d;
    d.add("p(1,1)", k.ubrs(repeat_rows_cols(bs, {1, 1}, {1, 1})).real(), 0.0);
    d.add("p(1,0)", k.ubrs(repeat_rows_cols(bs, {1, 0}, {1, 1})).real(), 0.5);
    d.add("p(0,1)", k.ubrs(repeat_rows_cols(bs, {0, 1}, {1, 1})).real(), 0.5);
    checks.push_back(finish("hom", d, tol(1e-12)));
  }
  {  // marginals: ignore one detector
    Deviation d;
    const double p10 = k.ubrs(repeat_rows_cols(bs, {1, 0}, {1, 1})).real();
    const double p01 = k.ubrs(repeat_rows_cols(bs, {0, 1}, {1, 1})).real();
    const double p11 = k.ubrs(repeat_rows_cols(bs, {1, 1}, {1, 1})).real();
    d.add("p(d1=1)", p10 + p11, 0.5);
    d.add("p(d2=1)", p01 + p11, 0.5);
    ComplexVector x(2);
    x << 0.0, 1.0;
    d.add("G(0,1)", generating_function(bs, {1, 1}, x).real(), 0.5);
    checks.push_back(finish("hom_marginals", d, tol(1e-12)));
  }
  {  // zero transmission law
    Deviation d;
    d.add("p(1,1,0)", k.ubrs(repeat_rows_cols(f3, {1, 1, 0}, {1, 1, 1})).real(), 0.0);
    d.add("p(0,1,1)", k.ubrs(repeat_rows_cols(f3, {0, 1, 1}, {1, 1, 1})).real(), 0.0);
    checks.push_back(finish("ztl3", d, tol(1e-12)));
  }
  {
    Deviation d;
    d.add("ubrs(U)", k.ubrs(f3).real(), 1.0 / 3.0);
    d.add("|per(U)|^2", std::norm(permanent(f3)), 1.0 / 3.0);
    checks.push_back(finish("ubrs_fourier3", d, tol(1e-12)));
  }
  {  // lossy HOM
    Deviation d;
    for (int i = 1; i <= 10; ++i) {
      const double eta = 0.1 * i;
      d.add("eta=" + format_double(eta), k.brs(std::sqrt(eta) * bs, (1.0 - eta) * ComplexMatrix::Identity(2, 2)).real(), 0.0);
    }
    checks.push_back(finish("lossy_hom", d, tol(1e-12)));
  }
  {  // lossy ZTL, relative deviation against eta^2 (1 - eta) / 3
    Deviation d;
    for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const ComplexMatrix tdn = repeat_rows_cols(std::sqrt(eta) * f3, {1, 1, 0}, {1, 1, 1});
      const double want = eta * eta * (1.0 - eta) / 3.0;
      const double got = k.brs(tdn, (1.0 - eta) * ComplexMatrix::Identity(3, 3)).real();
      d.add("rel eta=" + format_double(eta), got / want, 1.0);
    }
    checks.push_back(finish("lossy_ztl", d, tol(1e-10)));
  }
  {  // repeated columns, n=(1,2,0), d=(0,1,1)
    const Occupation n{1, 2, 0};
    const struct {
      double eta, want, tolerance;
    } cases[] = {{1.0, 2.0 / 9.0, 1e-10}, {0.9, 0.189, 5e-4}, {0.5, 0.069444444444444444, 1e-10}};
    SuiteCheck c{"repeated_columns", 0.0, 0.0, true, ""};
    std::ostringstream detail;
    for (const auto& cs : cases) {
      const ComplexMatrix t = std::sqrt(cs.eta) * f3;
      const ComplexMatrix tdn = repeat_rows_cols(t, {0, 1, 1}, n);
      const ComplexMatrix e = repeat_rows_cols(ComplexMatrix::Identity(3, 3) - t.adjoint() * t, n, n);
      const double got = k.brs(tdn, e).real() / n.factorial_product();
      const double dev = std::abs(got - cs.want);
      const double t_i = tol(cs.tolerance);
      c.deviation = std::max(c.deviation, dev);
      c.tolerance = std::max(c.tolerance, t_i);
      c.passed = c.passed && dev < t_i;
      detail << "eta=" << format_double(cs.eta) << ": " << format_double(got) << " (want " << format_double(cs.want)
             << ", tol " << format_double(t_i) << "); ";
    }
    c.detail = detail.str();
    checks.push_back(std::move(c));
  }
  {  // Five-mode Gaussian: selecting O_CC, gamma_C for d=(1,0,1,0,0)
    Deviation d;
    const std::size_t m = 5;
    ComplexMatrix labels(2 * m, 2 * m);
    for (Eigen::Index r = 0; r < labels.rows(); ++r)
      for (Eigen::Index c = 0; c < labels.cols(); ++c) labels(r, c) = Complex(static_cast<double>(r), static_cast<double>(c));
    const ClickPattern pattern{1, 0, 1, 0, 0};
    const ComplexMatrix occ = select_mode_pairs(labels, pattern.clicks(), m);
    const int expected[] = {0, 2, 5, 7};
    double worst = 0.0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) worst = std::max(worst, std::abs(occ(r, c) - Complex(expected[r], expected[c])));
    d.add("index mismatch", worst, 0.0);

    GaussianState s = vacuum_state(m);
    for (std::size_t j = 0; j < m; ++j) s = single_mode_squeezed(s, j, 0.1 * static_cast<double>(j + 1));
    s = displace(s, 1, Complex(0.3, -0.2));
    s = apply_channel(s, std::sqrt(0.8) * fourier_matrix(m));
    const ReducedForm r = reduce(s);
    const double got = r.p0 * k.ltor(select_mode_pairs(r.o, pattern.clicks(), m),
                                     select_mode_pairs(r.gamma, pattern.clicks(), m));
    d.add("p(1,0,1,0,0)", got, oracles::threshold_incexc_gaussian(s, pattern));
    checks.push_back(finish("ltor_index_convention", d, tol(1e-10)));
  }
  return checks;
}

void write_suite(std::ostream& out, const std::vector<SuiteCheck>& checks, Format format) {
  if (format == Format::csv) {
    out << "check,status,deviation,tolerance,detail\n";
    for (const auto& c : checks) {
      out << c.name << ',' << (c.passed ? "pass" : "fail") << ',' << format_double(c.deviation) << ','
          << format_double(c.tolerance) << ",\"" << c.detail << "\"\n";
    }
    return;
  }
  json j;
  j["command"] = "suite";
  j["checks"] = json::array();
  std::size_t passed = 0;
  double worst = 0.0;
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"deviation", c.deviation},
                           {"tolerance", c.tolerance},
                           {"detail", c.detail}});
    passed += c.passed;
    worst = std::max(worst, c.deviation);
  }
  j["passed"] = passed;
  j["total"] = checks.size();
  j["max_deviation"] = worst;
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// TVD experiment

TvdResult run_tvd(const TvdConfig& config) {
  if (config.max_modes > 10) throw CapExceededError("tvd: at most 10 modes at desk scale");
  if (config.photons > 4) throw CapExceededError("tvd: at most 4 photons at desk scale");
  if (config.min_modes == 0 || config.min_modes > config.max_modes) throw DimensionError("tvd: empty mode range");
  if (config.photons < 0 || static_cast<std::size_t>(config.photons) > config.min_modes) {
    throw DimensionError("tvd: photon count must fit in the smallest mode count");
  }
  if (!(config.eta >= 0.0 && config.eta <= 1.0)) throw InvalidChannelError("tvd: transmission must lie in [0, 1]");

  TvdResult result;
  for (std::size_t modes = config.min_modes; modes <= config.max_modes; ++modes) {
    std::vector<TvdSample> samples(config.samples);
    std::vector<int> n(modes, 0);
    std::fill_n(n.begin(), config.photons, 1);
    const Occupation input(n);
    detail::parallel_for(config.samples, config.threads, [&](std::size_t s) {
      const auto start = Clock::now();
      TvdSample& out = samples[s];
      out.modes = modes;
      out.sample = s;
      out.seed = config.seed ^ static_cast<std::uint64_t>(s);
      const FockExperiment exp(std::sqrt(config.eta) * haar_random_unitary(modes, out.seed), input);
      const ClickDistribution exact = fock_distribution(exp);
      ClickDistribution approx = oracles::approx_model_distribution(exp);
      out.tvd = total_variation_distance(exact, approx);
      const double mass = approx.total();
      if (mass > 0.0)
        for (double& p : approx.probabilities) p /= mass;
      out.tvd_renormalized = total_variation_distance(exact, approx);
      out.runtime_ms = config.timing ? elapsed_ms(start) : 0.0;
    });
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      const std::size_t k = v.size();
      return (k % 2) ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
    };
    std::vector<double> values, renormalized;
    for (const auto& s : samples) {
      values.push_back(s.tvd);
      renormalized.push_back(s.tvd_renormalized);
    }
    TvdSummary summary{modes, 0.0, 0.0, 0.0, 0.0};
    if (!values.empty()) {
      summary.min = *std::min_element(values.begin(), values.end());
      summary.max = *std::max_element(values.begin(), values.end());
      summary.median = median(values);
      summary.median_renormalized = median(renormalized);
    }
    result.summary.push_back(summary);
    result.samples.insert(result.samples.end(), samples.begin(), samples.end());
  }
  return result;
}

void write_tvd_csv(std::ostream& out, const TvdResult& result) {
  out << "M,sample,seed,tvd,runtime_ms,tvd_renormalized\n";
  for (const auto& s : result.samples) {
    out << s.modes << ',' << s.sample << ',' << s.seed << ',' << format_double(s.tvd) << ','
        << format_double(s.runtime_ms) << ',' << format_double(s.tvd_renormalized) << '\n';
  }
}

void write_tvd_summary_csv(std::ostream& out, const TvdResult& result) {
  out << "M,min,median,max,median_renormalized\n";
  for (const auto& s : result.summary) {
    out << s.modes << ',' << format_double(s.min) << ',' << format_double(s.median) << ',' << format_double(s.max)
        << ',' << format_double(s.median_renormalized) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct CommonFlags {
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  double tolerance = 0.0;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", f.output, "Write results to this path instead of stdout");
  cmd->add_option("--seed", f.seed, "Seed for random channels");
  cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::Range(std::size_t{1}, std::size_t{256}));
  cmd->add_option("--tolerance", f.tolerance, "Override validation tolerances")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-timing", f.no_timing, "Report zero runtimes for byte-stable output");
}

Options to_options(const CommonFlags& f, const CLI::App* cmd) {
  Options o;
  o.format = f.format == "csv" ? Format::csv : Format::json;
  o.output = f.output;
  o.seed = f.seed;
  o.threads = f.threads;
  if (cmd->count("--tolerance")) o.tolerance = f.tolerance;
  return o;
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw ParseError("cannot write '" + o.output + "'");
  file << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Threshold-detection probabilities for Fock and Gaussian experiments", "clickstats"};
  app.require_subcommand(1);

  CommonFlags compute_flags, validate_flags, suite_flags, tvd_flags;
  std::string spec_path;

  CLI::App* compute_cmd = app.add_subcommand("compute", "Evaluate an experiment spec");
  compute_cmd->add_option("spec", spec_path, "Experiment spec (JSON)")->required();
  add_common(compute_cmd, compute_flags);

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a spec's schema and physicality");
  validate_cmd->add_option("spec", spec_path, "Experiment spec (JSON)")->required();
  add_common(validate_cmd, validate_flags);

  CLI::App* suite_cmd = app.add_subcommand("suite", "Run the worked-example golden checks");
  add_common(suite_cmd, suite_flags);

  TvdConfig tvd;
  std::size_t modes_lo = 4, modes_hi = 8;
  CLI::App* tvd_cmd = app.add_subcommand("tvd", "Exact vs collision-free model total variation distance");
  tvd_cmd->add_option("--min-modes", modes_lo, "Smallest mode count");
  tvd_cmd->add_option("--max-modes", modes_hi, "Largest mode count");
  tvd_cmd->add_option("--samples", tvd.samples, "Haar unitaries per mode count");
  tvd_cmd->add_option("--eta", tvd.eta, "Uniform transmission");
  tvd_cmd->add_option("--photons", tvd.photons, "Single photons in the first modes");
  add_common(tvd_cmd, tvd_flags);
  tvd_flags.seed = 1;
  tvd_flags.format = "csv";

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*compute_cmd) {
      const Options o = to_options(compute_flags, compute_cmd);
      const ExperimentSpec spec = load_spec(spec_path, o);
      RunReport report = compute(spec, o);
      if (compute_flags.no_timing) report.runtime_ms = 0.0;
      std::ostringstream text;
      write_report(text, report, o.format);
      emit(text.str(), o, out);
      return kOk;
    }
    if (*validate_cmd) {
      const Options o = to_options(validate_flags, validate_cmd);
      validate(load_spec(spec_path, o), o);
      out << "ok\n";
      return kOk;
    }
    if (*suite_cmd) {
      const Options o = to_options(suite_flags, suite_cmd);
      const auto checks = run_golden_suite(SuiteKernels::library(), o.tolerance);
      std::ostringstream text;
      write_suite(text, checks, o.format);
      emit(text.str(), o, out);
      const bool ok = std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; });
      return ok ? kOk : kFailure;
    }
    if (*tvd_cmd) {
      const Options o = to_options(tvd_flags, tvd_cmd);
      tvd.min_modes = modes_lo;
      tvd.max_modes = modes_hi;
      tvd.seed = o.seed;
      tvd.threads = o.threads;
      tvd.timing = !tvd_flags.no_timing;
      const TvdResult result = run_tvd(tvd);
      if (o.format == Format::csv) {
        std::ostringstream samples, summary;
        write_tvd_csv(samples, result);
        write_tvd_summary_csv(summary, result);
        if (o.output.empty()) {
          out << samples.str() << '\n' << summary.str();
        } else {
          emit(samples.str(), o, out);
          Options side = o;
          side.output = o.output + ".summary.csv";
          emit(summary.str(), side, out);
        }
      } else {
        json j;
        j["command"] = "tvd";
        j["config"] = {{"eta", tvd.eta}, {"photons", tvd.photons}, {"samples", tvd.samples}, {"seed", tvd.seed},
                       {"threads", tvd.threads}};
        j["samples"] = json::array();
        for (const auto& s : result.samples)
          j["samples"].push_back({{"M", s.modes}, {"sample", s.sample}, {"seed", s.seed}, {"tvd", s.tvd},
                                  {"tvd_renormalized", s.tvd_renormalized}, {"runtime_ms", s.runtime_ms}});
        j["summary"] = json::array();
        for (const auto& s : result.summary)
          j["summary"].push_back({{"M", s.modes}, {"min", s.min}, {"median", s.median}, {"max", s.max}, {"median_renormalized", s.median_renormalized}});
        emit(j.dump(2) + "\n", o, out);
      }
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const UnphysicalError& e) {
    err << "error: " << e.what() << '\n';
    return kPhysicsError;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kPhysicsError;
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << '\n';
    return kCapError;
  }
  return kFailure;
}

}  // namespace clickstats::cli
