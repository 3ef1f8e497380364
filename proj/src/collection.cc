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

#include "dplimit/collection.h"

#include <algorithm>
#include <utility>

#include "dplimit/error.h"

namespace dplimit {

Collection::Collection(std::string name, std::vector<Language> languages,
                       CollectionTraits traits)
    : name_(std::move(name)),
      languages_(std::move(languages)),
      traits_(std::move(traits)) {
  if (languages_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "collection must be non-empty");
  }
}

Collection::Collection(std::string name,
                       std::function<Language(std::size_t)> rule,
                       CollectionTraits traits)
    : name_(std::move(name)), rule_(std::move(rule)), traits_(std::move(traits)) {}

std::optional<std::size_t> Collection::size() const {
  if (rule_) return std::nullopt;
  return languages_.size();
}

void Collection::CheckIndex(std::size_t i) const {
  if (i == 0 || (!rule_ && i > languages_.size())) {
    throw Error(ErrorCode::kIndexOutOfRange,
                name_ + ": language index " + std::to_string(i) +
                    " out of range");
  }
}

Language Collection::language(std::size_t i) const {
  CheckIndex(i);
  return rule_ ? rule_(i) : languages_[i - 1];
}

bool Collection::Contains(std::size_t i, Element x) const {
  CheckIndex(i);
  if (rule_) return rule_(i).Contains(x);
  return languages_[i - 1].Contains(x);
}

bool Membership(const Collection& collection, std::size_t i, Element x) {
  return collection.Contains(i, x);
}

ClosureDescriptor Closure(const std::vector<Language>& languages,
                          std::optional<int> closure_dimension_bound,
                          std::uint64_t scan_budget) {
  if (languages.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "closure of an empty index set");
  }
  const bool all_closed =
      std::all_of(languages.begin(), languages.end(),
                  [](const Language& l) { return l.closed_form() != nullptr; });
  if (all_closed) {
    ClosedFormSet acc = *languages.front().closed_form();
    for (std::size_t i = 1; i < languages.size(); ++i) {
      acc = Intersect(acc, *languages[i].closed_form());
    }
    return ClosureDescriptor::Infinite(std::move(acc));
  }

  std::optional<Element> horizon;
  for (const Language& l : languages) {
    if (const auto* p = l.predicate(); p && p->horizon) {
      horizon = horizon ? std::min(*horizon, *p->horizon) : *p->horizon;
    }
  }
  const std::uint64_t limit =
      horizon ? std::min<std::uint64_t>(scan_budget, *horizon) : scan_budget;
  std::vector<Element> found;
  for (Element x = 1; x <= limit; ++x) {
    const bool in_all =
        std::all_of(languages.begin(), languages.end(),
                    [x](const Language& l) { return l.Contains(x); });
    if (!in_all) continue;
    found.push_back(x);
    if (closure_dimension_bound &&
        found.size() > static_cast<std::size_t>(*closure_dimension_bound)) {
      return ClosureDescriptor::InfiniteScan(languages, scan_budget);
    }
  }
  if (horizon && scan_budget >= *horizon) {
    return ClosureDescriptor::ExactFinite(std::move(found));
  }
  throw Error(ErrorCode::kBudgetExhaustedUndecided,
              "found " + std::to_string(found.size()) + " common elements in " +
                  std::to_string(limit) +
                  " candidates; neither an infinite nor a finite certificate");
}

ClosureDescriptor Closure(const Collection& collection,
                          std::span<const std::size_t> indices) {
  if (indices.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "closure of an empty index set");
  }
  std::vector<Language> languages;
  languages.reserve(indices.size());
  for (std::size_t i : indices) languages.push_back(collection.language(i));
  return Closure(languages, collection.traits().closure_dimension_bound,
                 collection.traits().scan_budget);
}

int ClosureDimension(const Collection& collection) {
  if (!collection.is_finite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "closure dimension needs a finite collection");
  }
  const std::size_t k = *collection.size();
  if (k >= 32) {
    throw Error(ErrorCode::kInvalidArgument, "too many languages to enumerate");
  }
  std::vector<Language> all;
  for (std::size_t i = 1; i <= k; ++i) all.push_back(collection.language(i));

  int dimension = -1;
  std::vector<Language> members;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    members.clear();
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) members.push_back(all[i]);
    }
    ClosureDescriptor closure =
        Closure(members, collection.traits().closure_dimension_bound,
                collection.traits().scan_budget);
    if (!closure.is_infinite()) {
      dimension = std::max(dimension, static_cast<int>(closure.elements().size()));
    }
  }
  return dimension;
}

std::optional<std::uint64_t> ComputeOverlap(const Collection& collection,
                                            std::size_t d) {
  if (auto size = collection.size()) d = std::min(d, *size);
  std::uint64_t best = 0;
  for (std::size_t b = 2; b <= d; ++b) {
    for (std::size_t a = 1; a < b; ++a) {
      const std::size_t pair[] = {a, b};
      ClosureDescriptor closure = Closure(collection, pair);
      if (closure.is_infinite()) return std::nullopt;
      best = std::max<std::uint64_t>(best, closure.elements().size());
    }
  }
  return best;
}

TellTale MakeTellTale(const Collection& collection, std::size_t i,
                      std::size_t probe_bound) {
  if (!collection.traits().telltale) {
    throw Error(ErrorCode::kNoTellTale,
                collection.name() + " declares no tell-tales");
  }
  const Language target = collection.language(i);
  TellTale tale{i, collection.traits().telltale(i)};
  for (Element w : tale.elements) {
    if (!target.Contains(w)) {
      throw Error(ErrorCode::kModelViolation,
                  "tell-tale element " + std::to_string(w) + " not in L_" +
                      std::to_string(i));
    }
  }
  std::size_t last = probe_bound;
  if (auto size = collection.size()) last = std::min(last, *size);
  const ClosedFormSet* target_set = target.closed_form();
  for (std::size_t j = 1; j <= last; ++j) {
    if (j == i) continue;
    std::optional<Language> maybe;
    try {
      maybe = collection.language(j);
    } catch (const Error& e) {
      // Countable fixtures stop being representable in 64 bits.
      if (e.code() == ErrorCode::kOverflow) break;
      throw;
    }
    const Language& other = *maybe;
    const bool covers =
        std::all_of(tale.elements.begin(), tale.elements.end(),
                    [&](Element w) { return other.Contains(w); });
    if (!covers) continue;
    const ClosedFormSet* other_set = other.closed_form();
    if (target_set == nullptr || other_set == nullptr) {
      throw Error(ErrorCode::kNoTellTale,
                  "tell-tale validation needs closed-form languages");
    }
    if (other_set->IsSubsetOf(*target_set) && !(*other_set == *target_set)) {
      throw Error(ErrorCode::kModelViolation,
                  "L_" + std::to_string(j) + " contains the tell-tale of L_" +
                      std::to_string(i) + " and is a proper subset of it");
    }
  }
  return tale;
}

}  // namespace dplimit
