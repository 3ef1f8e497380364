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

#include "dplimit/rng.h"

#include <utility>

#include "dplimit/error.h"

namespace dplimit {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t HashLabel(std::string_view label) {
  // FNV-1a, then finalized.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(h);
}

}  // namespace

std::uint64_t SplitMix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed)
    : CounterRng(seed, SplitMix64(seed ^ 0x6a09e667f3bcc909ULL),
                 std::to_string(seed)) {}

CounterRng::CounterRng(std::uint64_t root_seed, std::uint64_t key,
                       std::string lineage)
    : root_seed_(root_seed), key_(key), lineage_(std::move(lineage)) {}

std::uint64_t CounterRng::NextU64() {
  ++counter_;
  return SplitMix64(key_ + counter_ * kGamma);
}

double CounterRng::Uniform01() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double CounterRng::UniformOpen01() {
  // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1.
  return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t CounterRng::UniformInt(std::uint64_t n) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "UniformInt range must be > 0");
  }
  // Lemire-free simple rejection: discard the biased top slice.
  const std::uint64_t limit = max() - (max() % n + 1) % n;
  std::uint64_t r;
  do {
    r = NextU64();
  } while (r > limit);
  return r % n;
}

CounterRng CounterRng::Fork(std::string_view label) const {
  return CounterRng(root_seed_, SplitMix64(key_ ^ HashLabel(label)),
                    lineage_ + "/" + std::string(label));
}

CounterRng CounterRng::Fork(std::uint64_t label) const {
  return Fork(std::to_string(label));
}

}  // namespace dplimit
