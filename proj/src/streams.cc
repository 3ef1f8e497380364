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

#include "dplimit/streams.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "dplimit/error.h"

namespace dplimit {

const char* StreamKindName(StreamKind kind) {
  switch (kind) {
    case StreamKind::kCanonical:
      return "canonical";
    case StreamKind::kInterleaved:
      return "interleaved";
    case StreamKind::kDelayed:
      return "delayed";
    case StreamKind::kSwapAdversary:
      return "swap_adversary";
    case StreamKind::kIid:
      return "iid";
  }
  return "unknown";
}

StreamKind ParseStreamKind(std::string_view name) {
  for (StreamKind k : {StreamKind::kCanonical, StreamKind::kInterleaved,
                       StreamKind::kDelayed, StreamKind::kSwapAdversary,
                       StreamKind::kIid}) {
    if (name == StreamKindName(k)) return k;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown stream kind '" + std::string(name) + "'");
}

SwapSchedule::SwapSchedule(std::vector<std::uint64_t> explicit_times)
    : times_(std::move(explicit_times)) {
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (times_[k] == 0 || (k > 0 && times_[k] <= times_[k - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "swap times must be positive and strictly increasing");
    }
  }
}

std::uint64_t SwapSchedule::Time(std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "swap index starts at 1");
  if (times_.empty()) {
    if (k >= 32) throw Error(ErrorCode::kOverflow, "4^k overflows");
    return 1ULL << (2 * k);
  }
  if (k <= times_.size()) return times_[k - 1];
  const std::size_t extra = k - times_.size();
  if (extra >= 64 || times_.back() > (~0ULL >> extra)) {
    throw Error(ErrorCode::kOverflow, "extended swap time overflows");
  }
  return times_.back() << extra;
}

Stream::Stream(const Collection& collection, const StreamSpec& spec)
    : spec_(spec),
      language_(collection.language(spec.target)),
      target_(spec.target),
      rng_(CounterRng(spec.seed).Fork(std::string("stream/") +
                                      StreamKindName(spec.kind))),
      schedule_(spec.swap_times) {
  if (spec_.kind == StreamKind::kInterleaved && spec_.block == 0) {
    throw Error(ErrorCode::kInvalidArgument, "interleave block must be >= 1");
  }
  if (spec_.kind == StreamKind::kIid &&
      !(spec_.geometric_p > 0.0 && spec_.geometric_p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "geometric p must be in (0, 1]");
  }
  if (spec_.kind != StreamKind::kSwapAdversary) return;

  std::size_t i = spec_.source;
  std::size_t j = spec_.target;
  if (i == 0 || i == j) {
    throw Error(ErrorCode::kInvalidArgument,
                "swap adversary needs a distinct source language");
  }
  Language li = collection.language(i);
  Language lj = collection.language(j);
  if (!li.closed_form() || !lj.closed_form()) {
    throw Error(ErrorCode::kInvalidArgument,
                "swap adversary needs closed-form languages");
  }
  if (!Intersect(*li.closed_form(), *lj.closed_form()).IsInfinite()) {
    throw Error(ErrorCode::kInvalidArgument, "L_i cap L_j must be infinite");
  }
  auto f = li.closed_form()->FiniteDifference(*lj.closed_form());
  if (!f) throw Error(ErrorCode::kInvalidArgument, "L_i \\ L_j must be finite");
  auto v = lj.closed_form()->FiniteDifference(*li.closed_form());
  if (v && v->size() < f->size()) {
    // Exchange roles so that the replacement pool is large enough.
    std::swap(i, j);
    std::swap(li, lj);
    std::swap(f, v);
  }
  target_ = j;
  language_ = lj;
  other_ = li;
  const std::size_t m = f->size();
  if (v) finite_pool_ = *v;
  // v_1..v_m are the smallest elements of V = L_j \ L_i.
  while (head_.size() < m) {
    if (v) {
      head_.push_back(finite_pool_[head_.size()]);
    } else {
      const Element x = language_.Nth(++pool_cursor_);
      if (!other_->Contains(x)) head_.push_back(x);
    }
  }
  if (v) finite_pool_.erase(finite_pool_.begin(), finite_pool_.begin() + m);
  std::reverse(finite_pool_.begin(), finite_pool_.end());  // pop from back
}

Element Stream::Base(std::uint64_t p) {
  // E^(0) = (v_1..v_m, a_1, a_2, ...), a = enumeration of L_i cap L_j.
  if (p <= head_.size()) return head_[p - 1];
  while (true) {
    const Element x = other_->Nth(++base_cursor_);
    if (language_.Contains(x)) return x;
  }
}

Element Stream::NextSwap() {
  const std::uint64_t p = position_;
  const Element base = Base(p);
  if (p != schedule_.Time(next_swap_)) return base;
  ++next_swap_;
  // Smallest pool element: displaced ones or the next fresh V element.
  std::optional<Element> fresh;
  if (!finite_pool_.empty()) {
    fresh = finite_pool_.back();
  } else if (!other_->closed_form() ||
             !language_.closed_form()->FiniteDifference(*other_->closed_form())) {
    std::uint64_t cursor = pool_cursor_;
    while (true) {
      const Element x = language_.Nth(++cursor);
      if (!other_->Contains(x) &&
          std::find(head_.begin(), head_.end(), x) == head_.end()) {
        fresh = x;
        break;
      }
    }
  }
  Element out = base;
  if (!displaced_.empty() && (!fresh || displaced_.top() < *fresh)) {
    out = displaced_.top();
    displaced_.pop();
  } else if (fresh) {
    out = *fresh;
    if (!finite_pool_.empty()) {
      finite_pool_.pop_back();
    } else {
      // Advance past everything up to and including `fresh`.
      while (language_.Nth(++pool_cursor_) != *fresh) {
      }
    }
  } else {
    return base;  // pool empty
  }
  displaced_.push(base);
  return out;
}

Element Stream::Next() {
  ++position_;
  switch (spec_.kind) {
    case StreamKind::kCanonical:
      return language_.Nth(position_);
    case StreamKind::kDelayed: {
      const std::uint64_t d = spec_.delay;
      if (position_ <= d) return language_.Nth(d + position_);
      if (position_ <= 2 * d) return language_.Nth(position_ - d);
      return language_.Nth(position_);
    }
    case StreamKind::kInterleaved: {
      if (chunk_pos_ == chunk_.size()) {
        const std::uint64_t b = spec_.block;
        const std::uint64_t first = 2 * b * chunk_index_ + 1;
        std::vector<Element> a, c;
        for (std::uint64_t t = 0; t < b; ++t) {
          a.push_back(language_.Nth(first + t));
          c.push_back(language_.Nth(first + b + t));
        }
        CounterRng shuffle = rng_.Fork(chunk_index_);
        std::shuffle(a.begin(), a.end(), shuffle);
        std::shuffle(c.begin(), c.end(), shuffle);
        chunk_.clear();
        for (std::uint64_t t = 0; t < b; ++t) {
          chunk_.push_back(a[t]);
          chunk_.push_back(c[t]);
        }
        chunk_pos_ = 0;
        ++chunk_index_;
      }
      return chunk_[chunk_pos_++];
    }
    case StreamKind::kSwapAdversary:
      return NextSwap();
    case StreamKind::kIid: {
      std::uint64_t j = 1;
      if (spec_.geometric_p < 1.0) {
        const double g = std::floor(std::log(rng_.UniformOpen01()) /
                                    std::log1p(-spec_.geometric_p));
        j += static_cast<std::uint64_t>(std::min(g, 1e18));
      }
      return language_.Nth(j);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown stream kind");
}

std::vector<Element> MaterializeStream(const Collection& collection,
                                       const StreamSpec& spec,
                                       std::size_t length) {
  Stream stream(collection, spec);
  std::vector<Element> out;
  out.reserve(length);
  for (std::size_t t = 0; t < length; ++t) out.push_back(stream.Next());
  return out;
}

void WritePrefix(std::ostream& out, std::span<const Element> prefix) {
  for (Element x : prefix) out << x << '\n';
}

NeighborPair MakeNeighborPair(std::span<const Element> stream,
                              std::span<const std::size_t> positions,
                              std::span<const Element> replacements,
                              const Language* validity) {
  if (positions.size() != replacements.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "one replacement per position required");
  }
  NeighborPair pair;
  pair.first.assign(stream.begin(), stream.end());
  pair.second = pair.first;
  std::set<std::size_t> seen;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const std::size_t p = positions[k];
    if (p == 0 || p > stream.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "position " + std::to_string(p) + " beyond the prefix");
    }
    if (!seen.insert(p).second) {
      throw Error(ErrorCode::kInvalidArgument, "positions must be distinct");
    }
    if (validity && !validity->Contains(replacements[k])) {
      throw Error(ErrorCode::kModelViolation,
                  "replacement " + std::to_string(replacements[k]) +
                      " outside " + validity->label());
    }
    pair.second[p - 1] = replacements[k];
  }
  pair.positions.assign(seen.begin(), seen.end());
  return pair;
}

NeighborPair RandomNeighborPair(std::span<const Element> stream, std::size_t c,
                                const Language& language, CounterRng& rng,
                                std::uint64_t pool) {
  if (c == 0 || c > stream.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need 1 <= c <= stream length");
  }
  if (pool < 2) throw Error(ErrorCode::kInvalidArgument, "pool must be >= 2");
  std::set<std::size_t> chosen;
  while (chosen.size() < c) chosen.insert(1 + rng.UniformInt(stream.size()));
  std::vector<std::size_t> positions(chosen.begin(), chosen.end());
  std::vector<Element> replacements;
  for (std::size_t p : positions) {
    Element x;
    do {
      x = language.Nth(1 + rng.UniformInt(pool));
    } while (x == stream[p - 1]);
    replacements.push_back(x);
  }
  return MakeNeighborPair(stream, positions, replacements, &language);
}

}  // namespace dplimit
