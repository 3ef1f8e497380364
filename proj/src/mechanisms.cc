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

#include "dplimit/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>

#include "dplimit/error.h"

namespace dplimit {

double LaplaceFromUniform(double u, double scale) {
  if (!(scale > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "Laplace scale must be positive");
  }
  const double centered = u - 0.5;
  if (centered == 0.0) return 0.0;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(centered));
  return centered < 0 ? -magnitude : magnitude;
}

double SampleLaplace(double scale, CounterRng& rng) {
  return LaplaceFromUniform(rng.UniformOpen01(), scale);
}

BudgetSchedule::BudgetSchedule(double total_epsilon) : total_(total_epsilon) {
  if (!(total_epsilon > 0.0) || !std::isfinite(total_epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
}

double BudgetSchedule::Epsilon(std::uint64_t s) const {
  if (s == 0) throw Error(ErrorCode::kInvalidArgument, "release index starts at 1");
  const double sd = static_cast<double>(s);
  return 6.0 * total_ / (std::numbers::pi * std::numbers::pi * sd * sd);
}

double BudgetSchedule::PartialSum(std::uint64_t S) const {
  if (S == 0) throw Error(ErrorCode::kInvalidArgument, "S must be >= 1");
  // Smallest terms first.
  double sum = 0.0;
  for (std::uint64_t s = S; s >= 1; --s) sum += Epsilon(s);
  return sum;
}

std::vector<double> ExpMechanismLogProbabilities(
    std::span<const double> utilities, std::span<const double> log_base,
    double lambda) {
  if (utilities.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty support");
  }
  if (!log_base.empty() && log_base.size() != utilities.size()) {
    throw Error(ErrorCode::kInvalidArgument, "base weight size mismatch");
  }
  if (!(lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
  std::vector<double> logw(utilities.size());
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    const double base = log_base.empty() ? 0.0 : log_base[i];
    // lambda == 0 ignores utilities, including -inf ones.
    logw[i] = base + (lambda == 0.0 ? 0.0 : lambda * utilities[i]);
    if (std::isnan(logw[i]) || logw[i] == std::numeric_limits<double>::infinity()) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite weight");
    }
  }
  const double shift = *std::max_element(logw.begin(), logw.end());
  if (!std::isfinite(shift)) {
    throw Error(ErrorCode::kInvalidArgument, "all weights are zero");
  }
  double total = 0.0;
  for (double w : logw) total += std::exp(w - shift);
  const double log_norm = shift + std::log(total);
  for (double& w : logw) w -= log_norm;
  return logw;
}

FiniteDraw ExpMechanismFinite(std::span<const double> utilities,
                              std::span<const double> log_base, double lambda,
                              CounterRng& rng) {
  FiniteDraw draw;
  draw.log_probabilities =
      ExpMechanismLogProbabilities(utilities, log_base, lambda);
  draw.probabilities.resize(draw.log_probabilities.size());
  for (std::size_t i = 0; i < draw.probabilities.size(); ++i) {
    draw.probabilities[i] = std::exp(draw.log_probabilities[i]);
  }
  const double u = rng.Uniform01();
  double acc = 0.0;
  draw.position = draw.probabilities.size() - 1;
  for (std::size_t i = 0; i < draw.probabilities.size(); ++i) {
    acc += draw.probabilities[i];
    if (u < acc) {
      draw.position = i;
      break;
    }
  }
  // Rounding can leave the tail with zero mass; never return such an index.
  while (draw.probabilities[draw.position] == 0.0 && draw.position > 0) {
    --draw.position;
  }
  return draw;
}

CountableDraw ExpMechanismCountable(const CountableExpSpec& spec,
                                    CounterRng& rng) {
  if (!(spec.bound_ratio > 0.0 && spec.bound_ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bound ratio must be in (0, 1)");
  }
  if (!(spec.lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
  const double log_ratio = std::log(spec.bound_ratio);
  CountableDraw draw;
  while (draw.proposals < spec.rejection_cap) {
    ++draw.proposals;
    // Normalized bound: Pr[i] = (1 - r) r^(i - 1).
    const double geometric = std::floor(std::log(rng.UniformOpen01()) / log_ratio);
    if (geometric >= 9.0e18) continue;
    const std::uint64_t i = 1 + static_cast<std::uint64_t>(geometric);
    draw.max_index_probed = std::max(draw.max_index_probed, i);
    const double log_q = spec.bound_log_scale + static_cast<double>(i) * log_ratio;
    const double log_pi = spec.log_base(i);
    if (log_pi > log_q + 1e-12) {
      throw Error(ErrorCode::kModelViolation,
                  "base weight exceeds the dominating bound at index " +
                      std::to_string(i));
    }
    double log_accept = log_pi - log_q;
    if (spec.lambda > 0.0 && std::isfinite(log_accept)) {
      const double u = spec.utility(i);
      if (u > 0.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "countable sampler needs utilities <= 0");
      }
      log_accept += spec.lambda * u;
    }
    if (std::log(rng.UniformOpen01()) < log_accept) {
      draw.index = i;
      return draw;
    }
  }
  throw Error(ErrorCode::kRejectionCap,
              "no acceptance after " + std::to_string(spec.rejection_cap) +
                  " proposals; largest index probed " +
                  std::to_string(draw.max_index_probed));
}

void MechanismTranscript::WriteCsv(std::ostream& out, bool header) const {
  if (header) out << "run_id,release_s,epsilon_spent,output_index,seed\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (const TranscriptRow& row : rows_) {
    out << row.run_id << ',' << row.release_s << ',' << row.epsilon_spent << ','
        << row.output_index << ',' << row.seed << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace dplimit
