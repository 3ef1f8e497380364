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

#ifndef DPLIMIT_GENERATION_H_
#define DPLIMIT_GENERATION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dplimit/collection.h"
#include "dplimit/mechanisms.h"
#include "dplimit/rng.h"

namespace dplimit {

// Largest k with k^6 <= t.
std::uint64_t IntegerSixthRoot(std::uint64_t t);

// Upper end of the uniform window, capped at 2^60.
constexpr std::uint64_t kMaxWindow = 1ULL << 60;

// ceil(2n / beta), capped at kMaxWindow.
std::uint64_t WindowSize(std::uint64_t n, double beta);

// Uniform member of the first `window` elements of an infinite closure.
Element ElementFromSet(const ClosureDescriptor& closure, std::uint64_t window,
                       CounterRng& rng);

// One step of a generator. `output` is empty when the generator emits the
// failure marker (or nothing yet).
struct GenStep {
  std::uint64_t t = 0;
  bool released = false;
  std::uint64_t k = 0;    // Alg. 1: languages considered; subset: epoch
  std::size_t J_t = 0;    // Alg. 1: prefix length; subset: |S|
  std::optional<Element> output;
  double epsilon_spent_cumulative = 0.0;
};

struct Alg1LedgerRow {
  std::uint64_t k = 0;
  std::uint64_t sensitivity = 0;
  double scale = 0.0;
  double epsilon = 0.0;
};

// One row per release k with k^6 <= horizon.
std::vector<Alg1LedgerRow> Alg1PrivacyLedger(std::uint64_t horizon,
                                             double epsilon);

// Continual-release generator for countable collections. Releases noisy
// consistency counts at t = k^6 and outputs from the largest infinite
// intersection prefix under the noisy priority order.
class PrivateApproximateIntersection {
 public:
  PrivateApproximateIntersection(const Collection& collection, double epsilon,
                                 CounterRng rng);

  GenStep Step(Element x);

  const std::vector<std::uint64_t>& noisy_counters() const { return counters_; }
  // P_i = i + N_i for i = 1..k.
  std::vector<std::uint64_t> priorities() const;
  // Language order used at the latest step (1-based indices).
  const std::vector<std::size_t>& order() const { return order_; }
  // Laplace draws of the latest release (before clamping), by language.
  const std::vector<double>& last_noise() const { return last_noise_; }

 private:
  void Release();
  void RebuildIntersection();

  const Collection& collection_;
  double epsilon0_;
  CounterRng rng_;
  std::uint64_t t_ = 0;
  std::uint64_t k_ = 0;
  double spent_ = 0.0;
  std::vector<Element> prefix_;
  std::vector<std::uint64_t> counters_;
  std::vector<std::size_t> order_;
  std::vector<double> last_noise_;
  std::size_t j_ = 0;
  std::optional<ClosureDescriptor> intersection_;
};

enum class LogBase { kNatural, kTwo };

struct SubsetOptions {
  // Closure dimension d of the collection.
  int closure_dimension = 0;
  LogBase log_base = LogBase::kNatural;
};

// f(n) = (1/k)(n - d - 2k log(2) / eps).
double SubsetScoreSlope(std::size_t k, int d, double epsilon, std::uint64_t n,
                        LogBase log_base = LogBase::kNatural);

// Scores of all non-empty subsets of a finite collection (k <= 20). Subset
// S is the bitmask with bit i-1 set for language i; position S - 1 in every
// returned vector.
class SubsetScorer {
 public:
  explicit SubsetScorer(const Collection& collection);

  std::size_t k() const { return k_; }
  std::uint32_t LanguageMask(Element x) const;
  // |Cl(L_S) cap x| for every non-empty S.
  std::vector<std::uint64_t> ClosureCounts(std::span<const Element> prefix) const;
  std::vector<double> Scores(std::span<const Element> prefix, double f) const;
  double Score(std::span<const Element> prefix, std::uint32_t subset,
               double f) const;
  const ClosureDescriptor& ClosureOf(std::uint32_t subset) const;

 private:
  const Collection& collection_;
  std::size_t k_;
  std::vector<ClosureDescriptor> closures_;
};

struct FiniteSampleResult {
  std::uint32_t subset = 0;
  std::optional<Element> element;  // empty: failure marker
  double beta = 0.0;
  std::vector<double> log_probabilities;  // over subsets 1..2^k - 1
};

// Exact release distribution over subsets with lambda = eps / 2.
std::vector<double> SubsetLogProbabilities(const SubsetScorer& scorer,
                                           std::span<const Element> prefix,
                                           double epsilon,
                                           const SubsetOptions& options);

// Samples a subset with the exponential mechanism, then an element of its
// closure with beta_n = exp(-eps (n - d) / (2k)) (or `beta_override`).
FiniteSampleResult UniformGenerateFiniteSample(
    const SubsetScorer& scorer, std::span<const Element> prefix, double epsilon,
    const SubsetOptions& options, CounterRng& rng,
    std::optional<double> beta_override = std::nullopt);

// Releases at n_t = 2^t + d with eps_t from the schedule; between releases
// outputs from the held closure with beta_n = min(epoch beta, 1/(100 n^2)).
class UniformContinualGenerator {
 public:
  UniformContinualGenerator(const Collection& collection, double epsilon,
                            SubsetOptions options, CounterRng rng);

  GenStep Step(Element x);

 private:
  SubsetScorer scorer_;
  BudgetSchedule schedule_;
  SubsetOptions options_;
  CounterRng rng_;
  std::vector<Element> prefix_;
  std::uint64_t epoch_ = 0;
  double spent_ = 0.0;
  std::optional<std::uint32_t> subset_;
  double epoch_beta_ = 1.0;
};

}  // namespace dplimit

#endif  // DPLIMIT_GENERATION_H_
