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

#ifndef DPLIMIT_LANGUAGE_H_
#define DPLIMIT_LANGUAGE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dplimit {

// An element of the universe. The universe is the positive naturals in
// numeric order; 0 is a representable value that no built-in language holds.
using Element = std::uint64_t;

// Cantor pairing, used to embed (x, tag) into a single element. Throws
// kOverflow when the result does not fit.
Element CantorPair(std::uint64_t x, std::uint64_t tag);
std::pair<std::uint64_t, std::uint64_t> CantorUnpair(Element z);

// {x >= start : x mod period in residues}. Residues are sorted, unique and
// lie in [0, period).
struct PeriodicPart {
  std::uint64_t period = 1;
  std::vector<std::uint64_t> residues;
  Element start = 1;

  bool Contains(Element x) const;
  // Number of members in [start, x].
  std::uint64_t CountUpTo(Element x) const;
};

// Exact description of every built-in language and of every intersection of
// built-in languages: finitely many extra elements plus an optional periodic
// tail, optionally embedded as {CantorPair(x, tag)}.
class ClosedFormSet {
 public:
  ClosedFormSet() = default;

  static ClosedFormSet Periodic(std::uint64_t period,
                                std::vector<std::uint64_t> residues,
                                Element start);
  static ClosedFormSet Finite(std::vector<Element> elements);

  // Adds elements (normalized against the periodic part).
  ClosedFormSet WithExtras(std::vector<Element> extras) const;
  ClosedFormSet Tagged(std::uint64_t tag) const;

  bool Contains(Element x) const;
  bool IsInfinite() const { return periodic_.has_value(); }
  bool IsEmpty() const { return !periodic_ && extras_.empty(); }
  // Only meaningful for finite sets.
  const std::vector<Element>& extras() const { return extras_; }
  const std::optional<PeriodicPart>& periodic() const { return periodic_; }
  const std::optional<std::uint64_t>& tag() const { return tag_; }

  // j-th smallest member, 1-based. Throws kIndexOutOfRange past the end of a
  // finite set and kOverflow when the member is not representable.
  Element Nth(std::uint64_t j) const;
  std::vector<Element> Prefix(std::size_t count) const;

  friend ClosedFormSet Intersect(const ClosedFormSet& a, const ClosedFormSet& b);
  bool IsSubsetOf(const ClosedFormSet& other) const;
  friend bool operator==(const ClosedFormSet& a, const ClosedFormSet& b) {
    return a.IsSubsetOf(b) && b.IsSubsetOf(a);
  }
  // this \ other when finite, nullopt when infinite.
  std::optional<std::vector<Element>> FiniteDifference(
      const ClosedFormSet& other) const;

 private:
  bool InnerContains(std::uint64_t x) const;
  std::uint64_t InnerNth(std::uint64_t j) const;
  ClosedFormSet Untagged() const;

  std::vector<Element> extras_;  // sorted, disjoint from periodic_
  std::optional<PeriodicPart> periodic_;
  std::optional<std::uint64_t> tag_;
};

// A user-supplied membership predicate. `horizon` (when set) promises that
// any finite intersection involving this language lies in [1, horizon].
struct PredicateSet {
  std::function<bool(Element)> member;
  std::uint64_t scan_budget = 10'000'000;
  std::optional<Element> horizon;
};

class Language {
 public:
  Language(std::string label, ClosedFormSet set)
      : label_(std::move(label)), repr_(std::move(set)) {}
  Language(std::string label, PredicateSet predicate)
      : label_(std::move(label)), repr_(std::move(predicate)) {}

  const std::string& label() const { return label_; }
  bool Contains(Element x) const;
  // j-th smallest member, 1-based.
  Element Nth(std::uint64_t j) const;
  std::vector<Element> Prefix(std::size_t count) const;

  const ClosedFormSet* closed_form() const {
    return std::get_if<ClosedFormSet>(&repr_);
  }
  const PredicateSet* predicate() const {
    return std::get_if<PredicateSet>(&repr_);
  }

 private:
  std::string label_;
  std::variant<ClosedFormSet, PredicateSet> repr_;
};

// Result of intersecting a subcollection: an exact finite set, or an
// infinite set with an enumerator.
class ClosureDescriptor {
 public:
  static ClosureDescriptor ExactFinite(std::vector<Element> elements);
  static ClosureDescriptor Infinite(ClosedFormSet set);
  static ClosureDescriptor InfiniteScan(std::vector<Language> members,
                                        std::uint64_t scan_budget);

  bool is_infinite() const;
  // Sorted members of an exact finite closure.
  const std::vector<Element>& elements() const;
  bool Contains(Element x) const;
  Element Nth(std::uint64_t j) const;
  std::vector<Element> Prefix(std::size_t count) const;

 private:
  struct Scan {
    std::vector<Language> members;
    std::uint64_t scan_budget;
  };
  explicit ClosureDescriptor(std::variant<std::vector<Element>, ClosedFormSet,
                                          Scan> repr)
      : repr_(std::move(repr)) {}

  std::variant<std::vector<Element>, ClosedFormSet, Scan> repr_;
};

}  // namespace dplimit

#endif  // DPLIMIT_LANGUAGE_H_
