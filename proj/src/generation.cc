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

#include "dplimit/generation.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "dplimit/error.h"

namespace dplimit {

namespace {

unsigned __int128 Pow6(std::uint64_t k) {
  unsigned __int128 p = 1;
  for (int e = 0; e < 6; ++e) p *= k;
  return p;
}

// A member of a closure: uniform over the window when infinite, uniform over
// the whole set when finite, nothing when empty.
std::optional<Element> DrawFromClosure(const ClosureDescriptor& closure,
                                       std::uint64_t window, CounterRng& rng) {
  if (closure.is_infinite()) return ElementFromSet(closure, window, rng);
  const auto& elements = closure.elements();
  if (elements.empty()) return std::nullopt;
  return elements[rng.UniformInt(elements.size())];
}

}  // namespace

std::uint64_t IntegerSixthRoot(std::uint64_t t) {
  auto k = static_cast<std::uint64_t>(std::pow(static_cast<double>(t), 1.0 / 6.0));
  while (k > 0 && Pow6(k) > t) --k;
  while (Pow6(k + 1) <= t) ++k;
  return k;
}

std::uint64_t WindowSize(std::uint64_t n, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta must be in (0, 1]");
  }
  const double w = std::ceil(2.0 * static_cast<double>(n) / beta);
  if (!(w < static_cast<double>(kMaxWindow))) return kMaxWindow;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(w));
}

Element ElementFromSet(const ClosureDescriptor& closure, std::uint64_t window,
                       CounterRng& rng) {
  if (!closure.is_infinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "element_from_set needs an infinite closure");
  }
  if (window == 0) throw Error(ErrorCode::kInvalidArgument, "empty window");
  return closure.Nth(1 + rng.UniformInt(window));
}

std::vector<Alg1LedgerRow> Alg1PrivacyLedger(std::uint64_t horizon,
                                             double epsilon) {
  if (horizon == 0) throw Error(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  const double eps0 = 6.0 * epsilon / (std::numbers::pi * std::numbers::pi);
  std::vector<Alg1LedgerRow> rows;
  const std::uint64_t last = IntegerSixthRoot(horizon);
  for (std::uint64_t k = 1; k <= last; ++k) {
    const double kd = static_cast<double>(k);
    rows.push_back({k, k, kd * kd * kd / eps0, eps0 / (kd * kd)});
  }
  return rows;
}

PrivateApproximateIntersection::PrivateApproximateIntersection(
    const Collection& collection, double epsilon, CounterRng rng)
    : collection_(collection),
      epsilon0_(6.0 * epsilon / (std::numbers::pi * std::numbers::pi)),
      rng_(std::move(rng)) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
}

std::vector<std::uint64_t> PrivateApproximateIntersection::priorities() const {
  std::vector<std::uint64_t> p(counters_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = i + 1 + counters_[i];
  return p;
}

void PrivateApproximateIntersection::Release() {
  std::size_t considered = k_;
  if (auto size = collection_.size()) considered = std::min(considered, *size);
  counters_.resize(considered, 0);
  last_noise_.assign(considered, 0.0);
  const double kd = static_cast<double>(k_);
  const double scale = kd * kd * kd / epsilon0_;
  const double td = static_cast<double>(t_);
  for (std::size_t i = 1; i <= considered; ++i) {
    const Language language = collection_.language(i);
    const auto misses = std::count_if(
        prefix_.begin(), prefix_.end(),
        [&](Element x) { return !language.Contains(x); });
    last_noise_[i - 1] = SampleLaplace(scale, rng_);
    const double noisy =
        std::max(0.0, static_cast<double>(misses) + last_noise_[i - 1]);
    const double id = static_cast<double>(i);
    if (noisy / td > 1.0 / (200.0 * id * id)) ++counters_[i - 1];
  }
  spent_ += epsilon0_ / (kd * kd);
  RebuildIntersection();
}

void PrivateApproximateIntersection::RebuildIntersection() {
  const std::vector<std::uint64_t> p = priorities();
  order_.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) order_[i] = i + 1;
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    return p[a - 1] < p[b - 1];
  });
  const auto& traits = collection_.traits();
  std::vector<Language> members;
  j_ = 0;
  intersection_.reset();
  for (std::size_t idx : order_) {
    members.push_back(collection_.language(idx));
    ClosureDescriptor closure =
        Closure(members, traits.closure_dimension_bound, traits.scan_budget);
    if (!closure.is_infinite()) break;
    j_ = members.size();
    intersection_ = std::move(closure);
  }
}

GenStep PrivateApproximateIntersection::Step(Element x) {
  ++t_;
  prefix_.push_back(x);
  GenStep step;
  step.t = t_;
  const std::uint64_t root = IntegerSixthRoot(t_);
  if (Pow6(root) == t_) {
    k_ = root;
    Release();
    step.released = true;
  }
  step.k = k_;
  step.J_t = j_;
  step.epsilon_spent_cumulative = spent_;
  if (intersection_) {
    const unsigned __int128 cube =
        static_cast<unsigned __int128>(t_) * t_ * t_ * 200;
    const std::uint64_t window =
        cube > kMaxWindow ? kMaxWindow : static_cast<std::uint64_t>(cube);
    step.output = ElementFromSet(*intersection_, window, rng_);
  }
  return step;
}

double SubsetScoreSlope(std::size_t k, int d, double epsilon, std::uint64_t n,
                        LogBase log_base) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  const double log2 = log_base == LogBase::kNatural ? std::numbers::ln2 : 1.0;
  const double kd = static_cast<double>(k);
  return (static_cast<double>(n) - d - 2.0 * kd * log2 / epsilon) / kd;
}

SubsetScorer::SubsetScorer(const Collection& collection)
    : collection_(collection), k_(0) {
  if (!collection.is_finite()) {
    throw Error(ErrorCode::kIncompatibleConfig,
                "subset mechanism needs a finite collection");
  }
  k_ = *collection.size();
  if (k_ > 20) {
    throw Error(ErrorCode::kInvalidArgument,
                "subset mechanism supports at most 20 languages");
  }
  const std::uint32_t subsets = 1u << k_;
  closures_.reserve(subsets - 1);
  std::vector<std::size_t> indices;
  for (std::uint32_t s = 1; s < subsets; ++s) {
    indices.clear();
    for (std::size_t i = 0; i < k_; ++i) {
      if (s & (1u << i)) indices.push_back(i + 1);
    }
    closures_.push_back(Closure(collection, indices));
  }
}

std::uint32_t SubsetScorer::LanguageMask(Element x) const {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < k_; ++i) {
    if (collection_.Contains(i + 1, x)) mask |= 1u << i;
  }
  return mask;
}

std::vector<std::uint64_t> SubsetScorer::ClosureCounts(
    std::span<const Element> prefix) const {
  // x in Cl(L_S) iff S is a subset of mask(x): superset sums of the histogram.
  const std::uint32_t subsets = 1u << k_;
  std::vector<std::uint64_t> sums(subsets, 0);
  for (Element x : prefix) ++sums[LanguageMask(x)];
  for (std::size_t i = 0; i < k_; ++i) {
    for (std::uint32_t s = 0; s < subsets; ++s) {
      if (!(s & (1u << i))) sums[s] += sums[s | (1u << i)];
    }
  }
  return std::vector<std::uint64_t>(sums.begin() + 1, sums.end());
}

std::vector<double> SubsetScorer::Scores(std::span<const Element> prefix,
                                         double f) const {
  const auto counts = ClosureCounts(prefix);
  std::vector<double> scores(counts.size());
  for (std::uint32_t s = 1; s <= counts.size(); ++s) {
    scores[s - 1] = static_cast<double>(counts[s - 1]) +
                    f * static_cast<double>(std::popcount(s));
  }
  return scores;
}

double SubsetScorer::Score(std::span<const Element> prefix,
                           std::uint32_t subset, double f) const {
  if (subset == 0 || subset >= (1u << k_)) {
    throw Error(ErrorCode::kInvalidArgument, "subset must be non-empty");
  }
  return Scores(prefix, f)[subset - 1];
}

const ClosureDescriptor& SubsetScorer::ClosureOf(std::uint32_t subset) const {
  if (subset == 0 || subset >= (1u << k_)) {
    throw Error(ErrorCode::kInvalidArgument, "subset must be non-empty");
  }
  return closures_[subset - 1];
}

std::vector<double> SubsetLogProbabilities(const SubsetScorer& scorer,
                                           std::span<const Element> prefix,
                                           double epsilon,
                                           const SubsetOptions& options) {
  const double f = SubsetScoreSlope(scorer.k(), options.closure_dimension,
                                    epsilon, prefix.size(), options.log_base);
  const auto scores = scorer.Scores(prefix, f);
  return ExpMechanismLogProbabilities(scores, {}, epsilon / 2.0);
}

FiniteSampleResult UniformGenerateFiniteSample(
    const SubsetScorer& scorer, std::span<const Element> prefix, double epsilon,
    const SubsetOptions& options, CounterRng& rng,
    std::optional<double> beta_override) {
  const double f = SubsetScoreSlope(scorer.k(), options.closure_dimension,
                                    epsilon, prefix.size(), options.log_base);
  const auto scores = scorer.Scores(prefix, f);
  FiniteDraw draw = ExpMechanismFinite(scores, {}, epsilon / 2.0, rng);
  FiniteSampleResult result;
  result.subset = static_cast<std::uint32_t>(draw.position + 1);
  result.log_probabilities = std::move(draw.log_probabilities);
  const double n = static_cast<double>(prefix.size());
  result.beta = beta_override.value_or(
      std::min(1.0, std::exp(-epsilon * (n - options.closure_dimension) /
                             (2.0 * static_cast<double>(scorer.k())))));
  const std::uint64_t window = WindowSize(std::max<std::size_t>(prefix.size(), 1),
                                          std::max(result.beta, 1e-300));
  result.element = DrawFromClosure(scorer.ClosureOf(result.subset), window, rng);
  return result;
}

UniformContinualGenerator::UniformContinualGenerator(const Collection& collection,
                                                     double epsilon,
                                                     SubsetOptions options,
                                                     CounterRng rng)
    : scorer_(collection),
      schedule_(epsilon),
      options_(options),
      rng_(std::move(rng)) {}

GenStep UniformContinualGenerator::Step(Element x) {
  prefix_.push_back(x);
  const std::uint64_t n = prefix_.size();
  GenStep step;
  step.t = n;
  // Next release at n_t = 2^t + d.
  const std::uint64_t next = epoch_ + 1;
  if (next < 62 && static_cast<std::int64_t>(n) ==
                       (1LL << next) + options_.closure_dimension) {
    epoch_ = next;
    const double eps_t = schedule_.Epsilon(epoch_);
    const double f = SubsetScoreSlope(scorer_.k(), options_.closure_dimension,
                                      eps_t, n, options_.log_base);
    FiniteDraw draw =
        ExpMechanismFinite(scorer_.Scores(prefix_, f), {}, eps_t / 2.0, rng_);
    subset_ = static_cast<std::uint32_t>(draw.position + 1);
    epoch_beta_ =
        std::min(1.0, std::exp(-eps_t *
                               (static_cast<double>(n) - options_.closure_dimension) /
                               (2.0 * static_cast<double>(scorer_.k()))));
    spent_ += eps_t;
    step.released = true;
  }
  step.k = epoch_;
  step.epsilon_spent_cumulative = spent_;
  if (!subset_) return step;
  step.J_t = static_cast<std::size_t>(std::popcount(*subset_));
  const double nd = static_cast<double>(n);
  const double beta = std::min(epoch_beta_, 1.0 / (100.0 * nd * nd));
  step.output =
      DrawFromClosure(scorer_.ClosureOf(*subset_), WindowSize(n, beta), rng_);
  return step;
}

}  // namespace dplimit
