//
// Copyright 2026 The dplimit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPLIMIT_EXPERIMENT_H_
#define DPLIMIT_EXPERIMENT_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dplimit/fixtures.h"
#include "dplimit/generation.h"
#include "dplimit/streams.h"

namespace dplimit {

enum class Algorithm { kAlg1, kUniformFinite, kUniformContinual, kAlg2, kAlg3 };

const char* AlgorithmName(Algorithm algorithm);
Algorithm ParseAlgorithm(std::string_view name);
bool IsGenerator(Algorithm algorithm);
// Default desk-scale burn-in per algorithm.
std::uint64_t DefaultBurnIn(Algorithm algorithm);

struct RunConfig {
  CollectionSpec collection = CollectionSpec::Parse("sperner:4");
  StreamSpec stream;
  Algorithm algorithm = Algorithm::kAlg1;
  double epsilon = 1.0;
  std::uint64_t horizon = 1024;
  std::vector<std::uint64_t> seeds = {1};
  std::string out;
  std::optional<std::uint64_t> burn_in;
  bool allow_duplicates = false;
  LogBase log_base = LogBase::kNatural;

  std::uint64_t effective_burn_in() const {
    return burn_in.value_or(DefaultBurnIn(algorithm));
  }
  // Throws kInvalidArgument / kIncompatibleConfig.
  void Validate() const;

  std::string ToJson() const;
  static RunConfig FromJson(const std::string& text);

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct SeedMetrics {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> last_mistake_time;
  std::uint64_t mistake_count = 0;
  bool success = false;  // no mistake after the burn-in
  double epsilon_spent = 0.0;

  friend bool operator==(const SeedMetrics&, const SeedMetrics&) = default;
};

struct RunMetrics {
  std::vector<SeedMetrics> seeds;
  double success_rate() const;
  // Median over seeds with a mistake; empty if no seed made one.
  std::optional<double> median_last_mistake_time() const;
};

// Per-step record shared by the step CSV and metrics.
struct StepRecord {
  std::uint64_t t = 0;
  std::uint64_t epoch = 0;
  std::optional<std::uint64_t> output;
  bool correct = false;
  double epsilon_cum = 0.0;
};

// Runs one seed and returns its steps (no file output).
std::vector<StepRecord> RunSeed(const RunConfig& config, std::uint64_t seed);
SeedMetrics MetricsFromSteps(const std::vector<StepRecord>& steps,
                             std::uint64_t seed, std::uint64_t burn_in);

// Runs every seed sequentially. When config.out is set, writes steps.csv,
// summary.csv, trace.csv, transcript.csv and config.json into that
// directory; on failure removes what was written and rethrows.
RunMetrics RunExperiment(const RunConfig& config);

void WriteSummaryCsv(std::ostream& out, const RunMetrics& metrics);
// Recomputes the summary from a step CSV.
RunMetrics MetricsFromStepsCsv(std::istream& in, std::uint64_t burn_in);

struct SweepCell {
  double epsilon = 0.0;
  std::uint64_t n = 0;
  double success = 0.0;  // minimum over targets
  double bound = 0.0;    // 1 - 5 exp(-eps (n - d) / (2k))
};

// uniform_finite on canonical prefixes of length n for every target.
std::vector<SweepCell> SampleComplexitySweep(
    const CollectionSpec& collection, const std::vector<double>& epsilons,
    const std::vector<std::uint64_t>& ns, std::uint64_t seeds,
    std::uint64_t base_seed = 1);
void WriteSweepCsv(std::ostream& out, const std::vector<SweepCell>& cells);
// Smallest n in the grid with success >= level, if any.
std::optional<std::uint64_t> SmallestSuccessfulN(
    const std::vector<SweepCell>& cells, double epsilon, double level);

struct AuditRow {
  std::string release;
  double budget = 0.0;
  double measured = 0.0;
  bool pass = false;
  bool control = false;  // negative control, expected to fail
};

struct AuditOptions {
  std::uint64_t pairs = 100;
  std::uint64_t release_n = 10;  // uniform_finite prefix length
  std::uint64_t max_epoch = 8;   // alg2 epochs 1..max_epoch
  std::vector<std::size_t> group_sizes = {1, 2, 3};
  std::uint64_t trials = 100'000;  // alg1 sampled audit
  std::uint64_t seed = 1;
};

std::vector<AuditRow> AuditPrivacy(const RunConfig& config,
                                   const AuditOptions& options = {});
void WriteAuditCsv(std::ostream& out, const std::vector<AuditRow>& rows);

}  // namespace dplimit

#endif  // DPLIMIT_EXPERIMENT_H_
