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

#ifndef DPLIMIT_AUDIT_H_
#define DPLIMIT_AUDIT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dplimit/rng.h"

namespace dplimit {

struct ExactCheck {
  double max_log_ratio = 0.0;
  bool pass = true;
  std::string diagnostic;
};

// Exact c-group check on per-outcome log-probabilities of two inputs that
// differ in c positions: passes iff max |log p - log p'| <= c * eps + 1e-9.
// -inf on both sides counts as 0; -inf on one side only fails.
ExactCheck DpCheckExactLog(std::span<const double> log_p,
                           std::span<const double> log_q, double epsilon,
                           std::size_t c = 1);
ExactCheck DpCheckExact(std::span<const double> p, std::span<const double> q,
                        double epsilon, std::size_t c = 1);

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

// Two-sided Clopper-Pearson interval for a binomial proportion.
Interval ClopperPearson(std::uint64_t successes, std::uint64_t trials,
                        double confidence = 0.99);

struct AuditCell {
  std::size_t cell = 0;
  std::uint64_t count_x = 0;
  std::uint64_t count_y = 0;
  Interval ci_x;
  Interval ci_y;
  double log_ratio = 0.0;        // point estimate, |log p_x / p_y|
  double log_ratio_lower = 0.0;  // lower confidence bound on |log p_x / p_y|
};

struct AuditResult {
  double epsilon_hat = 0.0;    // largest point estimate over kept cells
  double epsilon_lower = 0.0;  // largest lower confidence bound
  bool violation = false;      // epsilon_lower > budget
  std::vector<AuditCell> cells;
  std::vector<std::string> warnings;
};

// Monte-Carlo audit of a mechanism on a neighbouring pair. `run(which, rng)`
// executes the mechanism on stream `which` (0 or 1) and returns the outcome
// cell in [0, cells). Requires trials >= 1e4 and cells <= 32.
AuditResult DpAuditEmpirical(
    const std::function<std::size_t(int which, CounterRng& rng)>& run,
    std::size_t cells, std::uint64_t trials, double budget, CounterRng& rng,
    double confidence = 0.99);

}  // namespace dplimit

#endif  // DPLIMIT_AUDIT_H_
