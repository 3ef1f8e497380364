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

#ifndef DPLIMIT_COLLECTION_H_
#define DPLIMIT_COLLECTION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dplimit/language.h"

namespace dplimit {

// Largest pairwise intersection among the first d languages; nullopt means
// some pair intersects infinitely.
using OverlapFn = std::function<std::optional<std::uint64_t>(std::size_t d)>;
using TellTaleFn = std::function<std::vector<Element>(std::size_t i)>;

struct CollectionTraits {
  // Declared closure-dimension bound d (used to certify infinite closures of
  // predicate languages).
  std::optional<int> closure_dimension_bound;
  // Overlap function M, public input of the epoch identifier.
  OverlapFn overlap;
  // Closed-form tell-tales; set only on Angluin-satisfying fixtures.
  TellTaleFn telltale;
  std::uint64_t scan_budget = 10'000'000;
};

// An indexed family of languages L_1, L_2, ... (1-based). Either a finite
// list or a countable rule i -> L_i. Immutable after construction.
class Collection {
 public:
  Collection(std::string name, std::vector<Language> languages,
             CollectionTraits traits = {});
  Collection(std::string name, std::function<Language(std::size_t)> rule,
             CollectionTraits traits = {});

  const std::string& name() const { return name_; }
  bool is_finite() const { return !rule_; }
  // Number of languages for finite collections.
  std::optional<std::size_t> size() const;
  const CollectionTraits& traits() const { return traits_; }

  // Throws kIndexOutOfRange for i == 0 or i past a finite collection.
  Language language(std::size_t i) const;
  bool Contains(std::size_t i, Element x) const;

 private:
  void CheckIndex(std::size_t i) const;

  std::string name_;
  std::vector<Language> languages_;
  std::function<Language(std::size_t)> rule_;
  CollectionTraits traits_;
};

// Membership oracle: x in L_i.
bool Membership(const Collection& collection, std::size_t i, Element x);

// Intersection of the languages indexed by `indices` (non-empty). Exact for
// closed-form languages; predicate languages are scanned up to the
// collection's scan budget and certified infinite once more than the declared
// closure-dimension bound of members is found.
ClosureDescriptor Closure(const Collection& collection,
                          std::span<const std::size_t> indices);
ClosureDescriptor Closure(const std::vector<Language>& languages,
                          std::optional<int> closure_dimension_bound,
                          std::uint64_t scan_budget);

// Smallest d in {-1} u N such that every non-empty subcollection has an
// infinite closure or one of size <= d. Exhaustive over 2^k - 1 subsets.
int ClosureDimension(const Collection& collection);

// max_{a<b<=d} |L_a cap L_b| computed from exact closures; nullopt if some
// pair is infinite. M(1) = 0.
std::optional<std::uint64_t> ComputeOverlap(const Collection& collection,
                                            std::size_t d);

struct TellTale {
  std::size_t language_index;
  std::vector<Element> elements;
};

// The fixture's closed-form tell-tale for L_i, validated against every other
// index up to `probe_bound`: no L_j containing it may be a proper subset of
// L_i. Throws kNoTellTale for fixtures without declared tell-tales.
TellTale MakeTellTale(const Collection& collection, std::size_t i,
                      std::size_t probe_bound = 1000);

}  // namespace dplimit

#endif  // DPLIMIT_COLLECTION_H_
