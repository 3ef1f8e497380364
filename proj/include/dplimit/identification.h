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

#ifndef DPLIMIT_IDENTIFICATION_H_
#define DPLIMIT_IDENTIFICATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dplimit/collection.h"
#include "dplimit/mechanisms.h"
#include "dplimit/rng.h"

namespace dplimit {

struct IdStep {
  std::uint64_t t = 0;
  std::uint64_t epoch = 0;  // releases so far
  bool released = false;
  std::size_t output_index = 1;
  double epsilon_spent_cumulative = 0.0;
};

// W_s = max({1} u {d <= s : M(d) <= 2^s / 2}), also capped at the size of a
// finite collection.
std::size_t ActiveCap(const Collection& collection, std::uint64_t s);
std::size_t ActiveCap(const OverlapFn& overlap, std::uint64_t s,
                      std::optional<std::size_t> size = std::nullopt);

// s * exp(-lambda_s 2^(s-1)) with lambda_s = 3 eps / (pi^2 s^2).
double Alg2ErrorBound(std::uint64_t s, double epsilon);

// |x \ L_i|.
std::uint64_t ErrorCount(const Language& language, std::span<const Element> prefix);

// Exact release distribution of the epoch identifier at epoch s over
// indices 1..W_s, given the prefix x_{1:2^s}.
std::vector<double> Alg2ReleaseLogProbabilities(const Collection& collection,
                                                std::span<const Element> prefix,
                                                std::uint64_t s, double epsilon);

struct IdentifierOptions {
  // Accept repeated stream elements instead of rejecting the input.
  bool allow_duplicates = false;
};

// Epoch exponential mechanism over the data-independent active set. Outputs
// L_1 until the first release at t = 2.
class EpochExponentialIdentifier {
 public:
  EpochExponentialIdentifier(const Collection& collection, double epsilon,
                             CounterRng rng, IdentifierOptions options = {});

  IdStep Step(Element x);

 private:
  const Collection& collection_;
  BudgetSchedule schedule_;
  CounterRng rng_;
  IdentifierOptions options_;
  std::vector<Element> prefix_;
  std::unordered_set<Element> seen_;
  std::uint64_t epoch_ = 0;
  std::size_t output_ = 1;
  double spent_ = 0.0;
};

// Def(i) = sum_{w in T_i} max(0, k_s - c(w)).
class DeficitTable {
 public:
  void Add(Element x) { ++counts_[x]; }
  std::uint64_t count(Element x) const;
  std::uint64_t Deficit(std::span<const Element> telltale,
                        std::uint64_t threshold) const;

 private:
  std::unordered_map<Element, std::uint64_t> counts_;
};

// u_s(i) = -Err(i) - Def(i) computed from scratch on `prefix` with k_s = s^3.
double Alg3Utility(const Collection& collection, std::span<const Element> prefix,
                   std::uint64_t s, std::size_t i);

// log pi(i); default pi(i) = 2^-i.
using LogPrior = std::function<double(std::uint64_t)>;

// Exponential mechanism over all indices with tell-tale deficits and the
// base measure pi(i) s^(-2i), sampled exactly by rejection.
class PrivateStochasticIdentifier {
 public:
  PrivateStochasticIdentifier(const Collection& collection, double epsilon,
                              CounterRng rng, LogPrior log_prior = {},
                              std::uint64_t rejection_cap = 1'000'000);

  IdStep Step(Element x);
  // Proposals consumed by the latest release.
  std::uint64_t last_proposals() const { return last_proposals_; }

 private:
  double Utility(std::size_t i);

  const Collection& collection_;
  BudgetSchedule schedule_;
  CounterRng rng_;
  LogPrior log_prior_;
  std::uint64_t rejection_cap_;
  std::vector<Element> prefix_;
  DeficitTable deficits_;
  std::unordered_map<std::size_t, double> memo_;
  std::uint64_t epoch_ = 0;
  std::size_t output_ = 1;
  double spent_ = 0.0;
  std::uint64_t last_proposals_ = 0;
};

}  // namespace dplimit

#endif  // DPLIMIT_IDENTIFICATION_H_
