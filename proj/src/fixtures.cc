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

#include "dplimit/fixtures.h"

#include <charconv>
#include <limits>
#include <memory>

#include "dplimit/error.h"

namespace dplimit {

namespace {

constexpr std::uint64_t kMaxSpernerWidth = 1ULL << 26;

std::size_t ParseCount(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

// Residues of each language of the Sperner family, 0-based by language.
std::vector<std::vector<std::uint64_t>> SpernerResidues(std::size_t k) {
  const auto subsets = SpernerSubsets(k);
  std::vector<std::vector<std::uint64_t>> residues(k);
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    for (std::size_t i : subsets[j]) residues[i - 1].push_back(j + 1);
  }
  return residues;
}

std::vector<Language> SpernerLanguages(std::size_t k, std::size_t common,
                                       const std::string& prefix) {
  const std::uint64_t width = SpernerWidth(k);
  if (width > kMaxSpernerWidth) {
    throw Error(ErrorCode::kOverflow,
                "Sperner family too wide to materialize: k=" + std::to_string(k));
  }
  const auto residues = SpernerResidues(k);
  std::vector<Element> shared;
  for (std::size_t e = 1; e <= common; ++e) shared.push_back(e);
  std::vector<Language> out;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::uint64_t> shifted;
    for (std::uint64_t r : residues[i]) shifted.push_back(r + common);
    ClosedFormSet set =
        ClosedFormSet::Periodic(width, std::move(shifted), common + 1)
            .WithExtras(shared);
    out.emplace_back(prefix + "/L" + std::to_string(i + 1), std::move(set));
  }
  return out;
}

}  // namespace

Collection MakeThresholdCollection() {
  CollectionTraits traits;
  traits.overlap = [](std::size_t d) -> std::optional<std::uint64_t> {
    if (d <= 1) return 0;
    return std::nullopt;
  };
  traits.telltale = [](std::size_t i) { return std::vector<Element>{i}; };
  return Collection(
      "threshold",
      [](std::size_t l) {
        return Language("threshold/L" + std::to_string(l),
                        ClosedFormSet::Periodic(1, {0}, l));
      },
      std::move(traits));
}

Collection MakeDyadicCollection() {
  CollectionTraits traits;
  traits.overlap = [](std::size_t) -> std::optional<std::uint64_t> { return 0; };
  traits.telltale = [](std::size_t i) {
    if (i > 63) throw Error(ErrorCode::kOverflow, "dyadic index above 63");
    return std::vector<Element>{1ULL << (i - 1)};
  };
  return Collection(
      "dyadic",
      [](std::size_t i) {
        if (i > 63) throw Error(ErrorCode::kOverflow, "dyadic index above 63");
        const std::uint64_t half = 1ULL << (i - 1);
        if (i == 63) {
          return Language("dyadic/L63", ClosedFormSet::Finite({half, 3 * half}));
        }
        const std::uint64_t period = 1ULL << i;
        return Language("dyadic/L" + std::to_string(i),
                        ClosedFormSet::Periodic(period, {half}, 1));
      },
      std::move(traits));
}

std::vector<std::vector<std::size_t>> SpernerSubsets(std::size_t k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "Sperner needs k >= 1");
  const std::size_t h = k / 2;
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> current(h);
  for (std::size_t i = 0; i < h; ++i) current[i] = i + 1;
  while (true) {
    out.push_back(current);
    // Next combination in lexicographic order.
    std::size_t pos = h;
    while (pos > 0 && current[pos - 1] == k - h + pos) --pos;
    if (pos == 0) break;
    ++current[pos - 1];
    for (std::size_t i = pos; i < h; ++i) current[i] = current[i - 1] + 1;
  }
  return out;
}

std::uint64_t SpernerWidth(std::size_t k) {
  const std::size_t h = k / 2;
  unsigned __int128 c = 1;
  for (std::size_t i = 1; i <= h; ++i) {
    c = c * (k - h + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(ErrorCode::kOverflow,
                  "C(k, k/2) exceeds 64 bits for k=" + std::to_string(k));
    }
  }
  return static_cast<std::uint64_t>(c);
}

Collection MakeSpernerCollection(std::size_t k, std::size_t common) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "Sperner needs k >= 2");
  std::string name = "sperner[k=" + std::to_string(k);
  if (common > 0) name += ",common=" + std::to_string(common);
  name += "]";
  CollectionTraits traits;
  traits.closure_dimension_bound = static_cast<int>(common);
  auto languages = SpernerLanguages(k, common, name);
  // Overlaps are fixed by the family; compute once from exact closures.
  auto table = std::make_shared<std::vector<std::optional<std::uint64_t>>>();
  {
    Collection probe(name, languages, traits);
    for (std::size_t d = 0; d <= k; ++d) table->push_back(ComputeOverlap(probe, d));
  }
  traits.overlap = [table, k](std::size_t d) {
    return (*table)[std::min(d, k)];
  };
  return Collection(std::move(name), std::move(languages), std::move(traits));
}

Collection MakeDisjointUnionCollection(std::size_t k_max) {
  if (k_max < 2) {
    throw Error(ErrorCode::kInvalidArgument, "disjoint union needs k_max >= 2");
  }
  const std::string name = "disjoint_union[k_max=" + std::to_string(k_max) + "]";
  std::vector<Language> languages;
  for (std::size_t k = 2; k <= k_max; ++k) {
    const std::string component = name + "/C" + std::to_string(k);
    for (Language& l : SpernerLanguages(k, 0, component)) {
      languages.emplace_back(l.label(), l.closed_form()->Tagged(k));
    }
  }
  CollectionTraits traits;
  traits.closure_dimension_bound = 0;
  const std::size_t size = languages.size();
  auto table = std::make_shared<std::vector<std::optional<std::uint64_t>>>();
  {
    Collection probe(name, languages, traits);
    for (std::size_t d = 0; d <= size; ++d) {
      table->push_back(ComputeOverlap(probe, d));
    }
  }
  traits.overlap = [table, size](std::size_t d) {
    return (*table)[std::min(d, size)];
  };
  return Collection(name, std::move(languages), std::move(traits));
}

Collection MakePairSubsetCollection() {
  CollectionTraits traits;
  traits.overlap = [](std::size_t d) -> std::optional<std::uint64_t> {
    if (d <= 1) return 0;
    return std::nullopt;
  };
  std::vector<Language> languages;
  languages.emplace_back("pair_subset/evens", ClosedFormSet::Periodic(2, {0}, 1));
  languages.emplace_back("pair_subset/all", ClosedFormSet::Periodic(1, {0}, 1));
  return Collection("pair_subset", std::move(languages), std::move(traits));
}

CollectionSpec CollectionSpec::Parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t colon = text.find(':', begin);
    parts.push_back(text.substr(begin, colon - begin));
    if (colon == std::string_view::npos) break;
    begin = colon + 1;
  }
  CollectionSpec spec;
  spec.family = std::string(parts[0]);
  if (spec.family == "sperner") {
    if (parts.size() < 2 || parts.size() > 3) {
      throw Error(ErrorCode::kInvalidArgument, "expected sperner:<k>[:<common>]");
    }
    spec.k = ParseCount(parts[1], "k");
    if (parts.size() == 3) spec.common = ParseCount(parts[2], "common");
  } else if (spec.family == "disjoint_union") {
    if (parts.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument, "expected disjoint_union:<k_max>");
    }
    spec.k_max = ParseCount(parts[1], "k_max");
  } else if (spec.family == "threshold" || spec.family == "dyadic" ||
             spec.family == "pair_subset") {
    if (parts.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  spec.family + " takes no parameters");
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown collection family '" + spec.family + "'");
  }
  return spec;
}

std::string CollectionSpec::ToString() const {
  if (family == "sperner") {
    std::string s = "sperner:" + std::to_string(k);
    if (common > 0) s += ":" + std::to_string(common);
    return s;
  }
  if (family == "disjoint_union") return "disjoint_union:" + std::to_string(k_max);
  return family;
}

Collection CollectionSpec::Build() const {
  if (family == "sperner") return MakeSpernerCollection(k, common);
  if (family == "threshold") return MakeThresholdCollection();
  if (family == "dyadic") return MakeDyadicCollection();
  if (family == "disjoint_union") return MakeDisjointUnionCollection(k_max);
  if (family == "pair_subset") return MakePairSubsetCollection();
  throw Error(ErrorCode::kInvalidArgument,
              "unknown collection family '" + family + "'");
}

}  // namespace dplimit
