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
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "dplimit/error.h"
#include "dplimit/fixtures.h"
#include "dplimit/streams.h"

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

TEST(SwapScheduleTest, DefaultAndExplicit) {
  const SwapSchedule def;
  EXPECT_EQ(def.Time(1), 4u);
  EXPECT_EQ(def.Time(3), 64u);
  EXPECT_EQ(CodeOf([&] { def.Time(32); }), ErrorCode::kOverflow);
  const SwapSchedule ex({3, 10});
  EXPECT_EQ(ex.Time(2), 10u);
  EXPECT_EQ(ex.Time(3), 20u);
  EXPECT_EQ(ex.Time(5), 80u);
  EXPECT_EQ(CodeOf([] { SwapSchedule({5, 5}); }), ErrorCode::kInvalidArgument);
}

TEST(StreamTest, CanonicalIsEnumerator) {
  StreamSpec spec;
  spec.target = 3;
  EXPECT_EQ(MaterializeStream(MakeDyadicCollection(), spec, 4),
            (std::vector<Element>{4, 12, 20, 28}));
}

TEST(StreamTest, DelayedOrder) {
  StreamSpec spec;
  spec.kind = StreamKind::kDelayed;
  spec.delay = 3;
  spec.target = 2;
  EXPECT_EQ(MaterializeStream(MakeThresholdCollection(), spec, 9),
            (std::vector<Element>{5, 6, 7, 2, 3, 4, 8, 9, 10}));
}

TEST(StreamTest, InterleavedChunksArePermutations) {
  StreamSpec spec;
  spec.kind = StreamKind::kInterleaved;
  spec.block = 8;
  spec.seed = 3;
  spec.target = 1;
  const Collection c = MakeSpernerCollection(4);
  const auto s = MaterializeStream(c, spec, 64);
  const auto canon = c.language(1).Prefix(64);
  for (std::size_t chunk = 0; chunk < 4; ++chunk) {
    std::vector<Element> got(s.begin() + chunk * 16, s.begin() + (chunk + 1) * 16);
    std::vector<Element> want(canon.begin() + chunk * 16,
                              canon.begin() + (chunk + 1) * 16);
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, want);
  }
  EXPECT_NE(s, canon);
  EXPECT_EQ(s, MaterializeStream(c, spec, 64));
  spec.seed = 4;
  EXPECT_NE(s, MaterializeStream(c, spec, 64));
}

TEST(StreamTest, IidStaysInLanguage) {
  StreamSpec spec;
  spec.kind = StreamKind::kIid;
  spec.target = 3;
  spec.seed = 8;
  spec.geometric_p = 0.3;
  const Collection c = MakeThresholdCollection();
  for (Element x : MaterializeStream(c, spec, 2000)) EXPECT_GE(x, 3u);
  spec.geometric_p = 0.0;
  EXPECT_EQ(CodeOf([&] { MaterializeStream(c, spec, 1); }),
            ErrorCode::kInvalidArgument);
}

TEST(SwapAdversaryTest, PairSubsetTrace) {
  StreamSpec spec;
  spec.kind = StreamKind::kSwapAdversary;
  spec.source = 1;  // evens
  spec.target = 2;  // all
  Stream stream(MakePairSubsetCollection(), spec);
  std::vector<Element> got;
  for (int i = 0; i < 20; ++i) got.push_back(stream.Next());
  EXPECT_EQ(got, (std::vector<Element>{2, 4, 6, 1, 10, 12, 14, 16, 18, 20, 22,
                                       24, 26, 28, 30, 3, 34, 36, 38, 40}));
  EXPECT_EQ(stream.target(), 2u);
}

TEST(SwapAdversaryTest, ThresholdExchangesRoles) {
  // L_3 \ L_5 = {3, 4} while L_5 \ L_3 is empty, so the stream enumerates L_3.
  StreamSpec spec;
  spec.kind = StreamKind::kSwapAdversary;
  spec.source = 3;
  spec.target = 5;
  Stream stream(MakeThresholdCollection(), spec);
  std::vector<Element> got;
  for (int i = 0; i < 20; ++i) got.push_back(stream.Next());
  EXPECT_EQ(stream.target(), 3u);
  EXPECT_EQ(got, (std::vector<Element>{5, 6, 7, 3, 9, 10, 11, 12, 13, 14, 15,
                                       16, 17, 18, 19, 4, 21, 22, 23, 24}));
}

TEST(SwapAdversaryTest, EventuallyEnumeratesTarget) {
  StreamSpec spec;
  spec.kind = StreamKind::kSwapAdversary;
  spec.source = 1;
  spec.target = 2;
  spec.swap_times = {2, 3, 5};
  const auto s = MaterializeStream(MakePairSubsetCollection(), spec, 400);
  const std::set<Element> seen(s.begin(), s.end());
  EXPECT_EQ(seen.size(), s.size());
  // The heap of displaced elements is drained one per swap.
  for (Element x = 1; x <= 9; ++x) EXPECT_TRUE(seen.count(x)) << x;
}

TEST(SwapAdversaryTest, RejectsIncompatiblePairs) {
  StreamSpec spec;
  spec.kind = StreamKind::kSwapAdversary;
  spec.source = 1;
  spec.target = 2;
  EXPECT_EQ(CodeOf([&] { Stream(MakeSpernerCollection(4), spec); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { Stream(MakeDyadicCollection(), spec); }),
            ErrorCode::kInvalidArgument);
  spec.source = 0;
  EXPECT_EQ(CodeOf([&] { Stream(MakePairSubsetCollection(), spec); }),
            ErrorCode::kInvalidArgument);
}

TEST(NeighborPairTest, ExplicitReplacement) {
  const std::vector<Element> s = {2, 4, 6, 8};
  const std::size_t pos[] = {2, 4};
  const Element rep[] = {10, 12};
  const NeighborPair p = MakeNeighborPair(s, pos, rep);
  EXPECT_EQ(p.first, s);
  EXPECT_EQ(p.second, (std::vector<Element>{2, 10, 6, 12}));

  const Language evens = MakePairSubsetCollection().language(1);
  const Element odd[] = {3, 12};
  EXPECT_EQ(CodeOf([&] { MakeNeighborPair(s, pos, odd, &evens); }),
            ErrorCode::kModelViolation);
  const std::size_t bad[] = {5};
  const Element one[] = {2};
  EXPECT_EQ(CodeOf([&] { MakeNeighborPair(s, bad, one); }),
            ErrorCode::kIndexOutOfRange);
}

TEST(NeighborPairTest, RandomDiffersInExactlyCPositions) {
  const Language l = MakeSpernerCollection(4).language(2);
  const auto s = l.Prefix(30);
  CounterRng rng(6);
  for (std::size_t c = 1; c <= 3; ++c) {
    const NeighborPair p = RandomNeighborPair(s, c, l, rng);
    ASSERT_EQ(p.positions.size(), c);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      diff += p.first[i] != p.second[i];
      EXPECT_TRUE(l.Contains(p.second[i]));
    }
    EXPECT_EQ(diff, c);
  }
}

TEST(StreamTest, WritePrefixOnePerLine) {
  std::ostringstream out;
  const std::vector<Element> s = {3, 1, 4};
  WritePrefix(out, s);
  EXPECT_EQ(out.str(), "3\n1\n4\n");
}

TEST(StreamTest, ParseKinds) {
  for (StreamKind k : {StreamKind::kCanonical, StreamKind::kInterleaved,
                       StreamKind::kDelayed, StreamKind::kSwapAdversary,
                       StreamKind::kIid}) {
    EXPECT_EQ(ParseStreamKind(StreamKindName(k)), k);
  }
  EXPECT_EQ(CodeOf([] { ParseStreamKind("zigzag"); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace dplimit
