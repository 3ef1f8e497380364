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

#ifndef DPLIMIT_FIXTURES_H_
#define DPLIMIT_FIXTURES_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dplimit/collection.h"

namespace dplimit {

// L_l = {n >= l}, countable, nested. Tell-tale T_i = {i}.
Collection MakeThresholdCollection();

// L_i = {2^(i-1) (2t + 1) : t >= 0}, countable, partitions the universe.
// Tell-tale T_i = {2^(i-1)}.
Collection MakeDyadicCollection();

// The floor(k/2)-subsets S_1..S_N of [k] in lexicographic order.
std::vector<std::vector<std::size_t>> SpernerSubsets(std::size_t k);
// C(k, floor(k/2)); throws kOverflow outside 64-bit range.
std::uint64_t SpernerWidth(std::size_t k);

// L_i = {j + N t : S_j contains i, t >= 0}, i in [k], N = C(k, floor(k/2)).
// With `common` > 0 the elements 1..common are added to every language and
// the periodic part is shifted by `common`.
Collection MakeSpernerCollection(std::size_t k, std::size_t common = 0);

// Disjoint union of Sperner collections of sizes 2..k_max, component k
// embedded as {CantorPair(x, k)}. Language order: component 2 first.
Collection MakeDisjointUnionCollection(std::size_t k_max);

// L_1 = evens, L_2 = all naturals (L_1 a proper subset of L_2).
Collection MakePairSubsetCollection();

// Collection addressed by name and parameters.
struct CollectionSpec {
  std::string family;  // sperner | threshold | dyadic | disjoint_union | pair_subset
  std::size_t k = 0;
  std::size_t common = 0;
  std::size_t k_max = 0;

  // "sperner:4", "sperner:4:2", "disjoint_union:3", "threshold", ...
  static CollectionSpec Parse(std::string_view text);
  std::string ToString() const;
  Collection Build() const;

  friend bool operator==(const CollectionSpec&, const CollectionSpec&) = default;
};

}  // namespace dplimit

#endif  // DPLIMIT_FIXTURES_H_
