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

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "dplimit/collection.h"
#include "dplimit/error.h"
#include "dplimit/fixtures.h"
#include "dplimit/language.h"
#include "dplimit/rng.h"

namespace dplimit {
namespace {

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no dplimit::Error thrown";
  return ErrorCode::kIo;
}

std::vector<Element> Members(const Language& l, Element hi) {
  std::vector<Element> out;
  for (Element x = 1; x <= hi; ++x) {
    if (l.Contains(x)) out.push_back(x);
  }
  return out;
}

TEST(MembershipTest, FixtureExamples) {
  EXPECT_TRUE(Membership(MakeThresholdCollection(), 5, 7));
  EXPECT_FALSE(Membership(MakeThresholdCollection(), 5, 4));
  EXPECT_TRUE(Membership(MakeDyadicCollection(), 2, 6));
  EXPECT_FALSE(Membership(MakeDyadicCollection(), 2, 4));
  EXPECT_FALSE(Membership(MakeSpernerCollection(4), 1, 4));
}

TEST(MembershipTest, IndexOutOfRange) {
  const Collection sperner = MakeSpernerCollection(4);
  EXPECT_EQ(CodeOf([&] { sperner.Contains(5, 1); }), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(CodeOf([&] { sperner.Contains(0, 1); }), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(CodeOf([] { MakeThresholdCollection().language(0); }),
            ErrorCode::kIndexOutOfRange);
}

TEST(SpernerTest, SubsetsInLexicographicOrder) {
  const std::vector<std::vector<std::size_t>> expected = {
      {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
  EXPECT_EQ(SpernerSubsets(4), expected);
  EXPECT_EQ(SpernerWidth(4), 6u);
  EXPECT_EQ(SpernerWidth(6), 20u);
  EXPECT_EQ(SpernerSubsets(5).size(), 10u);
}

TEST(SpernerTest, FirstLanguageOfK4) {
  const Collection c = MakeSpernerCollection(4);
  EXPECT_EQ(Members(c.language(1), 12), (std::vector<Element>{1, 2, 3, 7, 8, 9}));
  EXPECT_EQ(c.language(1).Prefix(7),
            (std::vector<Element>{1, 2, 3, 7, 8, 9, 13}));
}

TEST(SpernerTest, K2IsOddsAndEvens) {
  const Collection c = MakeSpernerCollection(2);
  EXPECT_EQ(c.language(1).Prefix(4), (std::vector<Element>{1, 3, 5, 7}));
  EXPECT_EQ(c.language(2).Prefix(4), (std::vector<Element>{2, 4, 6, 8}));
}

TEST(SpernerTest, OverflowGuards) {
  EXPECT_EQ(CodeOf([] { SpernerWidth(70); }), ErrorCode::kOverflow);
  EXPECT_NO_THROW(SpernerWidth(66));
  EXPECT_EQ(CodeOf([] { MakeSpernerCollection(40); }), ErrorCode::kOverflow);
  EXPECT_EQ(CodeOf([] { MakeSpernerCollection(1); }), ErrorCode::kInvalidArgument);
}

TEST(ClosureTest, SpernerExamples) {
  const Collection c = MakeSpernerCollection(4);
  const std::size_t pair[] = {1, 2};
  const ClosureDescriptor cl = Closure(c, pair);
  ASSERT_TRUE(cl.is_infinite());
  EXPECT_EQ(cl.Prefix(4), (std::vector<Element>{1, 7, 13, 19}));

  const std::size_t triple[] = {1, 2, 3};
  const ClosureDescriptor empty = Closure(c, triple);
  ASSERT_FALSE(empty.is_infinite());
  EXPECT_TRUE(empty.elements().empty());

  const std::size_t all[] = {1, 2, 3, 4};
  EXPECT_TRUE(Closure(c, all).elements().empty());
}

TEST(ClosureTest, ThresholdIsNested) {
  const std::size_t s[] = {3, 5};
  const ClosureDescriptor cl = Closure(MakeThresholdCollection(), s);
  ASSERT_TRUE(cl.is_infinite());
  EXPECT_EQ(cl.Prefix(3), (std::vector<Element>{5, 6, 7}));
}

TEST(ClosureTest, EmptyIndexSetRejected) {
  EXPECT_EQ(CodeOf([] {
              Closure(MakeSpernerCollection(4), std::span<const std::size_t>());
            }),
            ErrorCode::kInvalidArgument);
}

TEST(ClosureTest, PredicateLanguages) {
  auto evens = Language("evens", PredicateSet{[](Element x) { return x % 2 == 0; }});
  auto threes = Language("threes", PredicateSet{[](Element x) { return x % 3 == 0; }});
  const ClosureDescriptor cl = Closure({evens, threes}, 0, 1000);
  ASSERT_TRUE(cl.is_infinite());
  EXPECT_EQ(cl.Prefix(3), (std::vector<Element>{6, 12, 18}));

  auto low = Language("low", PredicateSet{[](Element x) { return x <= 5; }});
  auto high = Language("high", PredicateSet{[](Element x) { return x >= 3; }});
  EXPECT_EQ(CodeOf([&] { Closure({low, high}, 5, 100); }),
            ErrorCode::kBudgetExhaustedUndecided);

  PredicateSet bounded{[](Element x) { return x <= 5; }};
  bounded.horizon = 10;
  auto low_h = Language("low", bounded);
  const ClosureDescriptor finite = Closure({low_h, high}, 5, 100);
  ASSERT_FALSE(finite.is_infinite());
  EXPECT_EQ(finite.elements(), (std::vector<Element>{3, 4, 5}));
}

TEST(ClosureDimensionTest, Fixtures) {
  EXPECT_EQ(ClosureDimension(MakeSpernerCollection(4)), 0);
  EXPECT_EQ(ClosureDimension(MakeSpernerCollection(4, 2)), 2);
  EXPECT_EQ(ClosureDimension(MakeDisjointUnionCollection(3)), 0);
  EXPECT_EQ(ClosureDimension(MakePairSubsetCollection()), -1);

  const Collection threshold = MakeThresholdCollection();
  std::vector<Language> head;
  for (std::size_t i = 1; i <= 5; ++i) head.push_back(threshold.language(i));
  EXPECT_EQ(ClosureDimension(Collection("threshold5", head)), -1);
  EXPECT_EQ(CodeOf([&] { ClosureDimension(threshold); }),
            ErrorCode::kInvalidArgument);
}

TEST(DisjointUnionTest, SizeAndCrossComponents) {
  const Collection c = MakeDisjointUnionCollection(3);
  ASSERT_EQ(c.size(), 5u);
  // Languages 1-2 are the k=2 copy, 3-5 the k=3 copy.
  for (std::size_t a = 1; a <= 2; ++a) {
    for (std::size_t b = 3; b <= 5; ++b) {
      const std::size_t pair[] = {a, b};
      const ClosureDescriptor cl = Closure(c, pair);
      ASSERT_FALSE(cl.is_infinite());
      EXPECT_TRUE(cl.elements().empty());
    }
  }
  // Component k=2, L_1 = {CantorPair(1 + 2t, 2)}.
  EXPECT_TRUE(c.Contains(1, CantorPair(1, 2)));
  EXPECT_TRUE(c.Contains(1, CantorPair(3, 2)));
  EXPECT_FALSE(c.Contains(1, CantorPair(2, 2)));
  EXPECT_FALSE(c.Contains(1, 1));
}

TEST(CantorTest, RoundTripAndOverflow) {
  EXPECT_EQ(CantorPair(0, 0), 0u);
  EXPECT_EQ(CantorPair(1, 2), 8u);
  for (std::uint64_t x = 0; x < 50; ++x) {
    for (std::uint64_t y = 0; y < 50; ++y) {
      EXPECT_EQ(CantorUnpair(CantorPair(x, y)), std::make_pair(x, y));
    }
  }
  EXPECT_EQ(CodeOf([] { CantorPair(1ULL << 40, 1ULL << 40); }), ErrorCode::kOverflow);
}

TEST(TellTaleTest, AngluinFixtures) {
  EXPECT_EQ(MakeTellTale(MakeThresholdCollection(), 4).elements,
            (std::vector<Element>{4}));
  EXPECT_EQ(MakeTellTale(MakeThresholdCollection(), 1).elements,
            (std::vector<Element>{1}));
  EXPECT_EQ(MakeTellTale(MakeDyadicCollection(), 2).elements,
            (std::vector<Element>{2}));
  EXPECT_EQ(MakeTellTale(MakeDyadicCollection(), 5).elements,
            (std::vector<Element>{16}));
}

TEST(TellTaleTest, OtherFixturesHaveNone) {
  EXPECT_EQ(CodeOf([] { MakeTellTale(MakeSpernerCollection(4), 1); }),
            ErrorCode::kNoTellTale);
  EXPECT_EQ(CodeOf([] { MakeTellTale(MakePairSubsetCollection(), 2); }),
            ErrorCode::kNoTellTale);
}

TEST(TellTaleTest, DetectsProperSubsetViolator) {
  // L_1 = all naturals, L_2 = evens: {2} cannot be a tell-tale for L_1.
  CollectionTraits traits;
  traits.telltale = [](std::size_t) { return std::vector<Element>{2}; };
  const Collection c("bad",
                     {Language("all", ClosedFormSet::Periodic(1, {0}, 1)),
                      Language("evens", ClosedFormSet::Periodic(2, {0}, 1))},
                     traits);
  EXPECT_EQ(CodeOf([&] { MakeTellTale(c, 1); }), ErrorCode::kModelViolation);
  EXPECT_NO_THROW(MakeTellTale(c, 2));
}

TEST(OverlapTest, DeclaredAndComputed) {
  const Collection sperner3 = MakeSpernerCollection(3);
  for (std::size_t d = 1; d <= 3; ++d) EXPECT_EQ(sperner3.traits().overlap(d), 0u);
  EXPECT_EQ(MakeSpernerCollection(4).traits().overlap(2), std::nullopt);
  EXPECT_EQ(MakeSpernerCollection(4).traits().overlap(1), 0u);
  EXPECT_EQ(MakeThresholdCollection().traits().overlap(2), std::nullopt);
  EXPECT_EQ(MakeDyadicCollection().traits().overlap(7), 0u);
  EXPECT_EQ(MakePairSubsetCollection().traits().overlap(2), std::nullopt);
  EXPECT_EQ(ComputeOverlap(MakeDisjointUnionCollection(3), 5), 0u);
}

TEST(ClosedFormSetTest, SubsetAndDifference) {
  const ClosedFormSet all = ClosedFormSet::Periodic(1, {0}, 1);
  const ClosedFormSet evens = ClosedFormSet::Periodic(2, {0}, 1);
  EXPECT_TRUE(evens.IsSubsetOf(all));
  EXPECT_FALSE(all.IsSubsetOf(evens));
  EXPECT_EQ(evens.FiniteDifference(all), std::vector<Element>{});
  EXPECT_EQ(all.FiniteDifference(evens), std::nullopt);
  const ClosedFormSet l3 = ClosedFormSet::Periodic(1, {0}, 3);
  const ClosedFormSet l5 = ClosedFormSet::Periodic(1, {0}, 5);
  EXPECT_EQ(l3.FiniteDifference(l5), (std::vector<Element>{3, 4}));
  EXPECT_TRUE(Intersect(evens, ClosedFormSet::Periodic(2, {1}, 1)).IsEmpty());
}

TEST(CollectionSpecTest, ParseAndPrint) {
  EXPECT_EQ(CollectionSpec::Parse("sperner:4").k, 4u);
  EXPECT_EQ(CollectionSpec::Parse("sperner:4:2").common, 2u);
  EXPECT_EQ(CollectionSpec::Parse("disjoint_union:3").k_max, 3u);
  for (const char* s : {"sperner:4", "sperner:5:1", "threshold", "dyadic",
                        "disjoint_union:3", "pair_subset"}) {
    EXPECT_EQ(CollectionSpec::Parse(s).ToString(), s);
  }
  for (const char* s : {"sperner", "sperner:x", "threshold:3", "nope", ""}) {
    EXPECT_EQ(CodeOf([&] { CollectionSpec::Parse(s); }), ErrorCode::kInvalidArgument)
        << s;
  }
}

// Properties.

std::vector<Collection> AllFixtures() {
  return {MakeThresholdCollection(),       MakeDyadicCollection(),
          MakeSpernerCollection(2),        MakeSpernerCollection(4),
          MakeSpernerCollection(5, 1),     MakeSpernerCollection(6),
          MakeDisjointUnionCollection(4),  MakePairSubsetCollection()};
}

TEST(LanguageProperty, EnumeratorAgreesWithMembership) {
  for (const Collection& c : AllFixtures()) {
    const std::size_t count = c.size().value_or(8);
    for (std::size_t i = 1; i <= count; ++i) {
      const Language l = c.language(i);
      Element prev = 0;
      for (std::uint64_t j = 1; j <= 1000; ++j) {
        const Element x = l.Nth(j);
        ASSERT_GT(x, prev) << l.label() << " j=" << j;
        ASSERT_TRUE(l.Contains(x)) << l.label() << " j=" << j;
        prev = x;
      }
      // Nothing skipped between enumerated members.
      const Element hi = l.Nth(200);
      EXPECT_EQ(Members(l, hi), l.Prefix(200)) << l.label();
    }
  }
}

TEST(LanguageProperty, ClosureAntitone) {
  CounterRng rng(7);
  for (const Collection& c : {MakeSpernerCollection(5), MakeDisjointUnionCollection(4),
                              MakeSpernerCollection(4, 2)}) {
    const std::size_t k = *c.size();
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::size_t> small, large;
      for (std::size_t i = 1; i <= k; ++i) {
        const auto r = rng.UniformInt(3);
        if (r == 0) small.push_back(i);
        if (r <= 1) large.push_back(i);
      }
      if (small.empty()) continue;
      const ClosureDescriptor big = Closure(c, large);
      const ClosureDescriptor sub = Closure(c, small);
      const std::vector<Element> probe =
          big.is_infinite() ? big.Prefix(50) : big.elements();
      for (Element x : probe) EXPECT_TRUE(sub.Contains(x));
    }
  }
}

TEST(LanguageProperty, SpernerClosureLaw) {
  for (std::size_t k = 2; k <= 6; ++k) {
    const Collection c = MakeSpernerCollection(k);
    const auto subsets = SpernerSubsets(k);
    const std::uint64_t n = subsets.size();
    for (std::size_t j = 1; j <= n; ++j) {
      const ClosureDescriptor cl = Closure(c, subsets[j - 1]);
      for (Element x = 1; x <= 10 * n; ++x) {
        ASSERT_EQ(cl.Contains(x), x % n == j % n) << "k=" << k << " j=" << j;
      }
    }
  }
}

TEST(LanguageProperty, SpernerAntichain) {
  for (std::size_t k = 2; k <= 8; ++k) {
    const auto subsets = SpernerSubsets(k);
    for (std::size_t a = 0; a < subsets.size(); ++a) {
      for (std::size_t b = 0; b < subsets.size(); ++b) {
        if (a == b) continue;
        EXPECT_FALSE(std::includes(subsets[b].begin(), subsets[b].end(),
                                   subsets[a].begin(), subsets[a].end()));
      }
    }
  }
}

TEST(LanguageProperty, DyadicPartitionsUniverse) {
  const Collection dyadic = MakeDyadicCollection();
  for (Element x = 1; x <= 10'000; ++x) {
    int hits = 0;
    for (std::size_t i = 1; i <= 15; ++i) hits += dyadic.Contains(i, x);
    ASSERT_EQ(hits, 1) << x;
  }
}

}  // namespace
}  // namespace dplimit
