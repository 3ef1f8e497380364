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

#ifndef DPLIMIT_STREAMS_H_
#define DPLIMIT_STREAMS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dplimit/collection.h"
#include "dplimit/rng.h"

namespace dplimit {

enum class StreamKind { kCanonical, kInterleaved, kDelayed, kSwapAdversary, kIid };

const char* StreamKindName(StreamKind kind);
StreamKind ParseStreamKind(std::string_view name);

// Swap times T_1 < T_2 < ... . Empty `explicit_times` means T_k = 4^k;
// an explicit list is extended past its end by doubling.
class SwapSchedule {
 public:
  SwapSchedule() = default;
  explicit SwapSchedule(std::vector<std::uint64_t> explicit_times);

  // 1-based.
  std::uint64_t Time(std::size_t k) const;
  const std::vector<std::uint64_t>& explicit_times() const { return times_; }

 private:
  std::vector<std::uint64_t> times_;
};

struct StreamSpec {
  StreamKind kind = StreamKind::kCanonical;
  std::size_t target = 1;
  // Swap adversary: the other language L_i (L_i \ L_j finite).
  std::size_t source = 0;
  std::vector<std::uint64_t> swap_times;
  // Interleaved: block length. Delayed: D.
  std::uint64_t block = 64;
  std::uint64_t delay = 64;
  // iid: geometric parameter over the enumerator.
  double geometric_p = 0.5;
  std::uint64_t seed = 0;

  friend bool operator==(const StreamSpec&, const StreamSpec&) = default;
};

// Incremental stream over a collection. Deterministic given (spec, seed).
class Stream {
 public:
  Stream(const Collection& collection, const StreamSpec& spec);

  Element Next();
  // Number of elements emitted so far.
  std::uint64_t position() const { return position_; }
  // Language actually enumerated (differs from spec.target only when the
  // swap adversary had to exchange roles).
  std::size_t target() const { return target_; }

 private:
  Element Base(std::uint64_t p);
  Element NextSwap();

  StreamSpec spec_;
  Language language_;
  std::size_t target_;
  std::uint64_t position_ = 0;
  CounterRng rng_;

  // Interleaved: current chunk, emitted round-robin.
  std::vector<Element> chunk_;
  std::size_t chunk_pos_ = 0;
  std::uint64_t chunk_index_ = 0;

  // Swap adversary.
  std::optional<Language> other_;
  std::vector<Element> head_;  // v_1..v_m
  SwapSchedule schedule_;
  std::size_t next_swap_ = 1;
  std::uint64_t base_cursor_ = 0;  // enumerator index into L_i cap L_j
  std::uint64_t pool_cursor_ = 0;  // enumerator index into L_j
  std::vector<Element> finite_pool_;  // set when L_j \ L_i is finite
  std::priority_queue<Element, std::vector<Element>, std::greater<Element>>
      displaced_;
};

std::vector<Element> MaterializeStream(const Collection& collection,
                                       const StreamSpec& spec,
                                       std::size_t length);

// Element-per-line dump for replay.
void WritePrefix(std::ostream& out, std::span<const Element> prefix);

struct NeighborPair {
  std::vector<Element> first;
  std::vector<Element> second;
  std::vector<std::size_t> positions;  // 1-based, sorted
};

// Replaces stream[positions[i]] by replacements[i] in the second stream.
// With `validity` set every replacement must belong to it.
NeighborPair MakeNeighborPair(std::span<const Element> stream,
                              std::span<const std::size_t> positions,
                              std::span<const Element> replacements,
                              const Language* validity = nullptr);

// c distinct random positions; replacements drawn from `language` (its first
// `pool` enumerated elements) and distinct from the originals.
NeighborPair RandomNeighborPair(std::span<const Element> stream, std::size_t c,
                                const Language& language, CounterRng& rng,
                                std::uint64_t pool = 64);

}  // namespace dplimit

#endif  // DPLIMIT_STREAMS_H_
