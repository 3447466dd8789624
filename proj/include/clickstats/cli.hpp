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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "clickstats/click_pattern.hpp"
#include "clickstats/gaussian.hpp"
#include "clickstats/linalg.hpp"

namespace clickstats::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kParseError = 2, kPhysicsError = 3, kCapError = 4 };

/// Malformed input or schema violation.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { fock, gaussian };
enum class Query { probability, distribution, photon_number };
enum class Format { json, csv };

struct ExperimentSpec {
  Kind kind = Kind::fock;
  Query query = Query::probability;
  ComplexMatrix channel;  // empty for Gaussian specs without a channel
  bool has_channel = false;
  Occupation occupation;  // Fock input
  std::optional<GaussianState> state;  // Gaussian input, before the channel
  std::optional<ClickPattern> outcome;
  std::optional<Occupation> photons;  // photon_number query
  std::uint64_t seed = 0;
  bool seed_used = false;
};

struct Options {
  Format format = Format::json;
  std::string output;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::optional<double> tolerance;
};

Tolerances tolerances_for(const Options& options);

/// Parses and validates the schema; physics checks happen in validate().
ExperimentSpec parse_spec(const std::string& text, const Options& options = {});
ExperimentSpec load_spec(const std::string& path, const Options& options = {});

/// Physicality checks; throws UnphysicalError naming the first violation.
void validate(const ExperimentSpec& spec, const Options& options = {});

struct ResultRow {
  std::string label;  // click pattern or occupation
  double probability = 0.0;
};

struct RunReport {
  std::string command;
  std::vector<ResultRow> results;
  double max_term = 0.0;
  double runtime_ms = 0.0;
  std::string path;  // which kernel served the query
  std::vector<std::size_t> selected_indices;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
};

RunReport compute(const ExperimentSpec& spec, const Options& options = {});

void write_report(std::ostream& out, const RunReport& report, Format format);

// Worked-example golden checks.  Kernels are injectable so the harness itself can
// be tested against a deliberately broken implementation.
struct SuiteKernels {
  std::function<Complex(const ComplexMatrix&)> ubrs;
  std::function<Complex(const ComplexMatrix&, const ComplexMatrix&)> brs;
  std::function<double(const ComplexMatrix&, const ComplexVector&)> ltor;

  static SuiteKernels library();
};

struct SuiteCheck {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

std::vector<SuiteCheck> run_golden_suite(const SuiteKernels& kernels, std::optional<double> tolerance = {});

void write_suite(std::ostream& out, const std::vector<SuiteCheck>& checks, Format format);

struct TvdConfig {
  std::size_t min_modes = 4;
  std::size_t max_modes = 8;
  std::size_t samples = 20;
  double eta = 0.6;
  int photons = 4;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool timing = true;
};

struct TvdSample {
  std::size_t modes = 0;
  std::size_t sample = 0;
  std::uint64_t seed = 0;
  double tvd = 0.0;
  double tvd_renormalized = 0.0;
  double runtime_ms = 0.0;
};

struct TvdSummary {
  std::size_t modes = 0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  double median_renormalized = 0.0;
};

struct TvdResult {
  std::vector<TvdSample> samples;
  std::vector<TvdSummary> summary;
};

TvdResult run_tvd(const TvdConfig& config);

void write_tvd_csv(std::ostream& out, const TvdResult& result);
void write_tvd_summary_csv(std::ostream& out, const TvdResult& result);

/// Formats with 17 significant digits.
std::string format_double(double x);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace clickstats::cli
