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

#ifndef DPLIMIT_RNG_H_
#define DPLIMIT_RNG_H_

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace dplimit {

// Counter-based generator: the i-th output is SplitMix64's finalizer applied
// to key + i * golden-gamma. Forking mixes a label into the key, so every
// random draw in a run is reproducible from the root seed and the lineage
// string alone.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

  std::uint64_t NextU64();

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform01();
  // Uniform on the open interval (0, 1).
  double UniformOpen01();
  // Uniform integer on [0, n); exact (rejection on the top bits). n > 0.
  std::uint64_t UniformInt(std::uint64_t n);

  CounterRng Fork(std::string_view label) const;
  CounterRng Fork(std::uint64_t label) const;

  std::uint64_t root_seed() const { return root_seed_; }
  std::uint64_t counter() const { return counter_; }
  // e.g. "7/seed=3/alg1"
  const std::string& lineage() const { return lineage_; }

 private:
  CounterRng(std::uint64_t root_seed, std::uint64_t key, std::string lineage);

  std::uint64_t root_seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::string lineage_;
};

std::uint64_t SplitMix64(std::uint64_t z);

}  // namespace dplimit

#endif  // DPLIMIT_RNG_H_
