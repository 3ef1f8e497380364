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

#include "dplimit/identification.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "dplimit/error.h"

namespace dplimit {

namespace {

bool IsPowerOfTwo(std::uint64_t t) { return t != 0 && (t & (t - 1)) == 0; }

}  // namespace

std::size_t ActiveCap(const OverlapFn& overlap, std::uint64_t s,
                      std::optional<std::size_t> size) {
  if (!overlap) {
    throw Error(ErrorCode::kIncompatibleConfig, "collection declares no overlap M");
  }
  if (s >= 63) throw Error(ErrorCode::kOverflow, "epoch too large");
  const std::uint64_t half = (1ULL << s) / 2;
  std::size_t cap = 1;
  std::uint64_t last = s;
  if (size) last = std::min<std::uint64_t>(last, *size);
  for (std::uint64_t d = 1; d <= last; ++d) {
    const auto m = overlap(d);
    if (m && *m <= half) cap = std::max<std::size_t>(cap, d);
  }
  return cap;
}

std::size_t ActiveCap(const Collection& collection, std::uint64_t s) {
  return ActiveCap(collection.traits().overlap, s, collection.size());
}

double Alg2ErrorBound(std::uint64_t s, double epsilon) {
  if (s == 0) throw Error(ErrorCode::kInvalidArgument, "epoch starts at 1");
  const double sd = static_cast<double>(s);
  const double lambda = 3.0 * epsilon / (std::numbers::pi * std::numbers::pi * sd * sd);
  return sd * std::exp(-lambda * std::ldexp(1.0, static_cast<int>(s) - 1));
}

std::uint64_t ErrorCount(const Language& language,
                         std::span<const Element> prefix) {
  return static_cast<std::uint64_t>(
      std::count_if(prefix.begin(), prefix.end(),
                    [&](Element x) { return !language.Contains(x); }));
}

std::vector<double> Alg2ReleaseLogProbabilities(const Collection& collection,
                                                std::span<const Element> prefix,
                                                std::uint64_t s, double epsilon) {
  const std::size_t cap = ActiveCap(collection, s);
  std::vector<double> utilities(cap);
  for (std::size_t i = 1; i <= cap; ++i) {
    utilities[i - 1] = -static_cast<double>(ErrorCount(collection.language(i), prefix));
  }
  const double eps_s = BudgetSchedule(epsilon).Epsilon(s);
  return ExpMechanismLogProbabilities(utilities, {}, eps_s / 2.0);
}

EpochExponentialIdentifier::EpochExponentialIdentifier(
    const Collection& collection, double epsilon, CounterRng rng,
    IdentifierOptions options)
    : collection_(collection),
      schedule_(epsilon),
      rng_(std::move(rng)),
      options_(options) {
  if (!collection.traits().overlap) {
    throw Error(ErrorCode::kIncompatibleConfig,
                collection.name() + " declares no overlap M");
  }
}

IdStep EpochExponentialIdentifier::Step(Element x) {
  if (!seen_.insert(x).second && !options_.allow_duplicates) {
    throw Error(ErrorCode::kModelViolation,
                "duplicate stream element " + std::to_string(x));
  }
  prefix_.push_back(x);
  const std::uint64_t t = prefix_.size();
  IdStep step;
  step.t = t;
  if (t >= 2 && IsPowerOfTwo(t)) {
    epoch_ = static_cast<std::uint64_t>(std::countr_zero(t));
    const std::size_t cap = ActiveCap(collection_, epoch_);
    std::vector<double> utilities(cap);
    for (std::size_t i = 1; i <= cap; ++i) {
      utilities[i - 1] =
          -static_cast<double>(ErrorCount(collection_.language(i), prefix_));
    }
    const double eps_s = schedule_.Epsilon(epoch_);
    output_ = ExpMechanismFinite(utilities, {}, eps_s / 2.0, rng_).position + 1;
    spent_ += eps_s;
    step.released = true;
  }
  step.epoch = epoch_;
  step.output_index = output_;
  step.epsilon_spent_cumulative = spent_;
  return step;
}

std::uint64_t DeficitTable::count(Element x) const {
  const auto it = counts_.find(x);
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t DeficitTable::Deficit(std::span<const Element> telltale,
                                    std::uint64_t threshold) const {
  std::uint64_t total = 0;
  for (Element w : telltale) {
    const std::uint64_t c = count(w);
    if (c < threshold) total += threshold - c;
  }
  return total;
}

double Alg3Utility(const Collection& collection, std::span<const Element> prefix,
                   std::uint64_t s, std::size_t i) {
  if (!collection.traits().telltale) {
    throw Error(ErrorCode::kNoTellTale, collection.name() + " declares no tell-tales");
  }
  DeficitTable table;
  for (Element x : prefix) table.Add(x);
  const std::vector<Element> telltale = collection.traits().telltale(i);
  const double err = static_cast<double>(ErrorCount(collection.language(i), prefix));
  const double def = static_cast<double>(table.Deficit(telltale, s * s * s));
  return -err - def;
}

PrivateStochasticIdentifier::PrivateStochasticIdentifier(
    const Collection& collection, double epsilon, CounterRng rng,
    LogPrior log_prior, std::uint64_t rejection_cap)
    : collection_(collection),
      schedule_(epsilon),
      rng_(std::move(rng)),
      log_prior_(std::move(log_prior)),
      rejection_cap_(rejection_cap) {
  if (!collection.traits().telltale) {
    throw Error(ErrorCode::kNoTellTale,
                collection.name() + " declares no tell-tales");
  }
  if (!log_prior_) {
    log_prior_ = [](std::uint64_t i) {
      return -static_cast<double>(i) * std::numbers::ln2;
    };
  }
}

double PrivateStochasticIdentifier::Utility(std::size_t i) {
  if (auto it = memo_.find(i); it != memo_.end()) return it->second;
  const std::uint64_t threshold = epoch_ * epoch_ * epoch_;
  const std::vector<Element> telltale = collection_.traits().telltale(i);
  const double err =
      static_cast<double>(ErrorCount(collection_.language(i), prefix_));
  const double def = static_cast<double>(deficits_.Deficit(telltale, threshold));
  const double u = -err - def;
  memo_.emplace(i, u);
  return u;
}

IdStep PrivateStochasticIdentifier::Step(Element x) {
  prefix_.push_back(x);
  deficits_.Add(x);
  const std::uint64_t t = prefix_.size();
  IdStep step;
  step.t = t;
  if (t >= 2 && IsPowerOfTwo(t)) {
    epoch_ = static_cast<std::uint64_t>(std::countr_zero(t));
    memo_.clear();
    const double eps_s = schedule_.Epsilon(epoch_);
    const double log_s = std::log(static_cast<double>(epoch_));
    const auto size = collection_.size();
    CountableExpSpec spec;
    spec.lambda = eps_s / 6.0;
    // pi_s(i) = pi(i) s^(-2i) <= (2 s^2)^(-i) for the default prior.
    spec.bound_ratio = 1.0 / (2.0 * static_cast<double>(epoch_ * epoch_));
    spec.bound_log_scale = 0.0;
    spec.rejection_cap = rejection_cap_;
    spec.log_base = [&](std::uint64_t i) {
      if (size && i > *size) return -std::numeric_limits<double>::infinity();
      return log_prior_(i) - 2.0 * static_cast<double>(i) * log_s;
    };
    spec.utility = [&](std::uint64_t i) {
      return Utility(static_cast<std::size_t>(i));
    };
    const CountableDraw draw = ExpMechanismCountable(spec, rng_);
    output_ = static_cast<std::size_t>(draw.index);
    last_proposals_ = draw.proposals;
    spent_ += eps_s;
    step.released = true;
  }
  step.epoch = epoch_;
  step.output_index = output_;
  step.epsilon_spent_cumulative = spent_;
  return step;
}

}  // namespace dplimit
