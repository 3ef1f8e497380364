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

#ifndef DPLIMIT_MECHANISMS_H_
#define DPLIMIT_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dplimit/rng.h"

namespace dplimit {

// Inverse CDF of Laplace(0, b) at u in (0, 1).
double LaplaceFromUniform(double u, double scale);
double SampleLaplace(double scale, CounterRng& rng);

// eps_s = 6 eps / (pi^2 s^2), s >= 1.
class BudgetSchedule {
 public:
  explicit BudgetSchedule(double total_epsilon);

  double total_epsilon() const { return total_; }
  double Epsilon(std::uint64_t s) const;
  // sum_{s <= S} eps_s, S >= 1.
  double PartialSum(std::uint64_t S) const;

 private:
  double total_;
};

// log of the normalized weights exp(log_base_i + lambda * u_i). An empty
// `log_base` means uniform base weights. Computed with a max shift.
std::vector<double> ExpMechanismLogProbabilities(
    std::span<const double> utilities, std::span<const double> log_base,
    double lambda);

struct FiniteDraw {
  std::size_t position = 0;  // 0-based position in the support
  std::vector<double> probabilities;
  std::vector<double> log_probabilities;
};

FiniteDraw ExpMechanismFinite(std::span<const double> utilities,
                              std::span<const double> log_base, double lambda,
                              CounterRng& rng);

// Countable support {1, 2, ...} with base weights dominated by the geometric
// bound q_i = exp(log_scale) * ratio^i. Utilities must be <= 0 and are
// evaluated only at proposed indices.
struct CountableExpSpec {
  std::function<double(std::uint64_t)> utility;
  std::function<double(std::uint64_t)> log_base;
  double lambda = 0.0;
  double bound_log_scale = 0.0;
  double bound_ratio = 0.5;
  std::uint64_t rejection_cap = 1'000'000;
};

struct CountableDraw {
  std::uint64_t index = 0;
  std::uint64_t proposals = 0;
  std::uint64_t max_index_probed = 0;
};

CountableDraw ExpMechanismCountable(const CountableExpSpec& spec,
                                    CounterRng& rng);

// One row per release.
struct TranscriptRow {
  std::string run_id;
  std::uint64_t release_s = 0;
  double epsilon_spent = 0.0;
  std::uint64_t output_index = 0;
  std::uint64_t seed = 0;
  std::uint64_t support_probed = 0;
  std::string lineage;
  std::vector<double> probabilities;
};

class MechanismTranscript {
 public:
  void Add(TranscriptRow row) { rows_.push_back(std::move(row)); }
  const std::vector<TranscriptRow>& rows() const { return rows_; }

  // Header: run_id,release_s,epsilon_spent,output_index,seed
  void WriteCsv(std::ostream& out, bool header = true) const;

 private:
  std::vector<TranscriptRow> rows_;
};

}  // namespace dplimit

#endif  // DPLIMIT_MECHANISMS_H_
