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

#include "dplimit/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/beta.hpp>

#include "dplimit/error.h"

namespace dplimit {

namespace {

constexpr double kSlack = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

ExactCheck DpCheckExactLog(std::span<const double> log_p,
                           std::span<const double> log_q, double epsilon,
                           std::size_t c) {
  if (log_p.size() != log_q.size()) {
    throw Error(ErrorCode::kInvalidArgument, "outcome spaces differ in size");
  }
  if (c == 0) throw Error(ErrorCode::kInvalidArgument, "group size must be >= 1");
  ExactCheck check;
  for (std::size_t o = 0; o < log_p.size(); ++o) {
    const bool zero_p = log_p[o] == -kInf;
    const bool zero_q = log_q[o] == -kInf;
    if (zero_p && zero_q) continue;
    if (zero_p != zero_q) {
      check.max_log_ratio = kInf;
      check.pass = false;
      check.diagnostic = "support mismatch at outcome " + std::to_string(o);
      return check;
    }
    check.max_log_ratio =
        std::max(check.max_log_ratio, std::abs(log_p[o] - log_q[o]));
  }
  check.pass = check.max_log_ratio <= static_cast<double>(c) * epsilon + kSlack;
  if (!check.pass) {
    check.diagnostic = "max log-ratio " + std::to_string(check.max_log_ratio) +
                       " exceeds " + std::to_string(c) + " * " +
                       std::to_string(epsilon);
  }
  return check;
}

ExactCheck DpCheckExact(std::span<const double> p, std::span<const double> q,
                        double epsilon, std::size_t c) {
  std::vector<double> lp(p.size()), lq(q.size());
  std::transform(p.begin(), p.end(), lp.begin(),
                 [](double v) { return std::log(v); });
  std::transform(q.begin(), q.end(), lq.begin(),
                 [](double v) { return std::log(v); });
  return DpCheckExactLog(lp, lq, epsilon, c);
}

Interval ClopperPearson(std::uint64_t successes, std::uint64_t trials,
                        double confidence) {
  if (trials == 0 || successes > trials) {
    throw Error(ErrorCode::kInvalidArgument, "bad binomial counts");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "confidence must be in (0, 1)");
  }
  const double alpha = 1.0 - confidence;
  const double k = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  Interval ci;
  if (successes > 0) {
    boost::math::beta_distribution<> lo(k, n - k + 1.0);
    ci.lower = boost::math::quantile(lo, alpha / 2.0);
  }
  if (successes < trials) {
    boost::math::beta_distribution<> hi(k + 1.0, n - k);
    ci.upper = boost::math::quantile(hi, 1.0 - alpha / 2.0);
  }
  return ci;
}

AuditResult DpAuditEmpirical(
    const std::function<std::size_t(int which, CounterRng& rng)>& run,
    std::size_t cells, std::uint64_t trials, double budget, CounterRng& rng,
    double confidence) {
  if (trials < 10'000) {
    throw Error(ErrorCode::kInvalidArgument, "audit needs at least 1e4 trials");
  }
  if (cells == 0 || cells > 32) {
    throw Error(ErrorCode::kInvalidArgument, "partition must have 1..32 cells");
  }
  std::vector<std::uint64_t> count_x(cells, 0), count_y(cells, 0);
  CounterRng rng_x = rng.Fork("audit/x");
  CounterRng rng_y = rng.Fork("audit/y");
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (int which = 0; which < 2; ++which) {
      CounterRng& r = which == 0 ? rng_x : rng_y;
      const std::size_t cell = run(which, r);
      if (cell >= cells) {
        throw Error(ErrorCode::kInvalidArgument,
                    "outcome cell " + std::to_string(cell) + " out of range");
      }
      ++(which == 0 ? count_x : count_y)[cell];
    }
  }

  AuditResult result;
  for (std::size_t c = 0; c < cells; ++c) {
    if (count_x[c] == 0 && count_y[c] == 0) {
      result.warnings.push_back("cell " + std::to_string(c) +
                                " empty under both streams; excluded");
      continue;
    }
    AuditCell cell;
    cell.cell = c;
    cell.count_x = count_x[c];
    cell.count_y = count_y[c];
    cell.ci_x = ClopperPearson(count_x[c], trials, confidence);
    cell.ci_y = ClopperPearson(count_y[c], trials, confidence);
    if (count_x[c] == 0 || count_y[c] == 0) {
      cell.log_ratio = kInf;
      result.warnings.push_back("cell " + std::to_string(c) +
                                " empty under one stream; point estimate "
                                "unbounded, lower bound still finite");
    } else {
      cell.log_ratio = std::abs(std::log(static_cast<double>(count_x[c]) /
                                         static_cast<double>(count_y[c])));
    }
    // Lower confidence bound on each direction of the ratio.
    double lower = 0.0;
    if (cell.ci_x.lower > 0.0) {
      lower = std::max(lower, std::log(cell.ci_x.lower / cell.ci_y.upper));
    }
    if (cell.ci_y.lower > 0.0) {
      lower = std::max(lower, std::log(cell.ci_y.lower / cell.ci_x.upper));
    }
    cell.log_ratio_lower = lower;
    result.epsilon_hat = std::max(result.epsilon_hat, cell.log_ratio);
    result.epsilon_lower = std::max(result.epsilon_lower, lower);
    result.cells.push_back(cell);
  }
  result.violation = result.epsilon_lower > budget;
  return result;
}

}  // namespace dplimit
