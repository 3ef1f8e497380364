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

#include "dplimit/language.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dplimit/error.h"

namespace dplimit {

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kMaxU64 = std::numeric_limits<std::uint64_t>::max();
// Periods above this are refused when intersecting periodic parts.
constexpr std::uint64_t kMaxPeriod = 1ULL << 26;

std::uint64_t CheckedNarrow(u128 v, const char* what) {
  if (v > kMaxU64) throw Error(ErrorCode::kOverflow, what);
  return static_cast<std::uint64_t>(v);
}

// Members y of {y >= 0 : y = r mod p} with y <= x.
std::uint64_t CountResidue(std::uint64_t x, std::uint64_t r, std::uint64_t p) {
  return x >= r ? (x - r) / p + 1 : 0;
}

std::uint64_t Lcm(std::uint64_t a, std::uint64_t b) {
  const u128 l = static_cast<u128>(a / std::gcd(a, b)) * b;
  if (l > kMaxPeriod) {
    throw Error(ErrorCode::kOverflow, "period of intersection exceeds 2^26");
  }
  return static_cast<std::uint64_t>(l);
}

std::optional<PeriodicPart> IntersectPeriodic(const PeriodicPart& a,
                                              const PeriodicPart& b) {
  const std::uint64_t period = Lcm(a.period, b.period);
  // Lift the cheaper side's residues to the common period.
  const bool lift_a = a.residues.size() * (period / a.period) <=
                      b.residues.size() * (period / b.period);
  const PeriodicPart& lifted = lift_a ? a : b;
  const PeriodicPart& other = lift_a ? b : a;
  std::vector<std::uint64_t> residues;
  for (std::uint64_t r : lifted.residues) {
    for (std::uint64_t m = 0; m < period / lifted.period; ++m) {
      const std::uint64_t candidate = r + m * lifted.period;
      if (std::binary_search(other.residues.begin(), other.residues.end(),
                             candidate % other.period)) {
        residues.push_back(candidate);
      }
    }
  }
  if (residues.empty()) return std::nullopt;
  std::sort(residues.begin(), residues.end());
  return PeriodicPart{period, std::move(residues), std::max(a.start, b.start)};
}

// Calls fn(x) for each member x of `part` with x < limit, in increasing order;
// stops early when fn returns false.
template <typename Fn>
bool ForEachBelow(const PeriodicPart& part, std::uint64_t limit, Fn fn) {
  constexpr std::uint64_t kMaxVisits = 50'000'000;
  std::uint64_t visits = 0;
  for (std::uint64_t base = (part.start / part.period) * part.period;
       base < limit; base += part.period) {
    for (std::uint64_t r : part.residues) {
      const std::uint64_t x = base + r;
      if (x < part.start) continue;
      if (x >= limit) return true;
      if (++visits > kMaxVisits) {
        throw Error(ErrorCode::kBudgetExhaustedUndecided,
                    "periodic comparison window too large");
      }
      if (!fn(x)) return false;
    }
  }
  return true;
}

}  // namespace

Element CantorPair(std::uint64_t x, std::uint64_t tag) {
  const u128 s = static_cast<u128>(x) + tag;
  return CheckedNarrow(s * (s + 1) / 2 + tag, "Cantor pairing overflow");
}

std::pair<std::uint64_t, std::uint64_t> CantorUnpair(Element z) {
  // w = floor((sqrt(8z + 1) - 1) / 2), corrected in exact arithmetic.
  u128 w = static_cast<u128>((std::sqrt(8.0L * z + 1.0L) - 1.0L) / 2.0L);
  while (w * (w + 1) / 2 > z) --w;
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  const u128 t = w * (w + 1) / 2;
  const std::uint64_t tag = static_cast<std::uint64_t>(z - t);
  return {static_cast<std::uint64_t>(w - tag), tag};
}

bool PeriodicPart::Contains(Element x) const {
  return x >= start &&
         std::binary_search(residues.begin(), residues.end(), x % period);
}

std::uint64_t PeriodicPart::CountUpTo(Element x) const {
  if (x < start) return 0;
  std::uint64_t count = 0;
  for (std::uint64_t r : residues) {
    count += CountResidue(x, r, period) - CountResidue(start - 1, r, period);
  }
  return count;
}

ClosedFormSet ClosedFormSet::Periodic(std::uint64_t period,
                                      std::vector<std::uint64_t> residues,
                                      Element start) {
  if (period == 0 || start == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "periodic set needs period >= 1 and start >= 1");
  }
  for (auto& r : residues) r %= period;
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
  ClosedFormSet set;
  if (!residues.empty()) {
    set.periodic_ = PeriodicPart{period, std::move(residues), start};
  }
  return set;
}

ClosedFormSet ClosedFormSet::Finite(std::vector<Element> elements) {
  return ClosedFormSet().WithExtras(std::move(elements));
}

ClosedFormSet ClosedFormSet::WithExtras(std::vector<Element> extras) const {
  ClosedFormSet out = *this;
  out.extras_.insert(out.extras_.end(), extras.begin(), extras.end());
  std::sort(out.extras_.begin(), out.extras_.end());
  out.extras_.erase(std::unique(out.extras_.begin(), out.extras_.end()),
                    out.extras_.end());
  if (out.periodic_) {
    std::erase_if(out.extras_,
                  [&](Element x) { return out.periodic_->Contains(x); });
  }
  return out;
}

ClosedFormSet ClosedFormSet::Tagged(std::uint64_t tag) const {
  if (tag_) {
    throw Error(ErrorCode::kInvalidArgument, "set is already tagged");
  }
  ClosedFormSet out = *this;
  out.tag_ = tag;
  return out;
}

ClosedFormSet ClosedFormSet::Untagged() const {
  ClosedFormSet out = *this;
  out.tag_.reset();
  return out;
}

bool ClosedFormSet::InnerContains(std::uint64_t x) const {
  if (periodic_ && periodic_->Contains(x)) return true;
  return std::binary_search(extras_.begin(), extras_.end(), x);
}

bool ClosedFormSet::Contains(Element x) const {
  if (!tag_) return InnerContains(x);
  const auto [inner, tag] = CantorUnpair(x);
  return tag == *tag_ && InnerContains(inner);
}

std::uint64_t ClosedFormSet::InnerNth(std::uint64_t j) const {
  if (j == 0) throw Error(ErrorCode::kInvalidArgument, "indices are 1-based");
  if (!periodic_) {
    if (j > extras_.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "index " + std::to_string(j) + " past finite set of size " +
                      std::to_string(extras_.size()));
    }
    return extras_[j - 1];
  }
  const PeriodicPart& p = *periodic_;
  // The j-th periodic member is below start + period * (j / |R| + 1); extras
  // only move it earlier.
  u128 bound = static_cast<u128>(p.period) * (j / p.residues.size() + 1) +
               p.start;
  const std::uint64_t hi_bound = bound > kMaxU64 ? kMaxU64
                                                 : static_cast<std::uint64_t>(bound);
  auto count = [&](std::uint64_t x) {
    return p.CountUpTo(x) +
           static_cast<std::uint64_t>(
               std::upper_bound(extras_.begin(), extras_.end(), x) -
               extras_.begin());
  };
  if (count(hi_bound) < j) {
    throw Error(ErrorCode::kOverflow,
                "member " + std::to_string(j) + " exceeds 64-bit range");
  }
  std::uint64_t lo = 1, hi = hi_bound;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (count(mid) >= j) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

Element ClosedFormSet::Nth(std::uint64_t j) const {
  const std::uint64_t inner = InnerNth(j);
  return tag_ ? CantorPair(inner, *tag_) : inner;
}

std::vector<Element> ClosedFormSet::Prefix(std::size_t count) const {
  std::vector<Element> out;
  out.reserve(count);
  for (std::size_t j = 1; j <= count; ++j) out.push_back(Nth(j));
  return out;
}

ClosedFormSet Intersect(const ClosedFormSet& a, const ClosedFormSet& b) {
  if (a.tag_ != b.tag_) return ClosedFormSet();
  ClosedFormSet out;
  if (a.periodic_ && b.periodic_) {
    out.periodic_ = IntersectPeriodic(*a.periodic_, *b.periodic_);
  }
  std::vector<Element> extras;
  for (Element x : a.extras_) {
    if (b.InnerContains(x)) extras.push_back(x);
  }
  for (Element x : b.extras_) {
    if (a.InnerContains(x)) extras.push_back(x);
  }
  out = out.WithExtras(std::move(extras));
  out.tag_ = a.tag_;
  return out;
}

bool ClosedFormSet::IsSubsetOf(const ClosedFormSet& other) const {
  if (IsEmpty()) return true;
  if (tag_ != other.tag_) return false;
  for (Element x : extras_) {
    if (!other.InnerContains(x)) return false;
  }
  if (!periodic_) return true;
  if (!other.periodic_) return false;
  // Beyond `settle` both periodic parts repeat with the common period and
  // `other` has no extras, so one full period past it decides the rest.
  const std::uint64_t period = Lcm(periodic_->period, other.periodic_->period);
  std::uint64_t settle = std::max(periodic_->start, other.periodic_->start);
  if (!other.extras_.empty()) settle = std::max(settle, other.extras_.back() + 1);
  return ForEachBelow(*periodic_, settle + period,
                      [&](Element x) { return other.InnerContains(x); });
}

std::optional<std::vector<Element>> ClosedFormSet::FiniteDifference(
    const ClosedFormSet& other) const {
  std::vector<Element> out;
  if (tag_ != other.tag_) {
    if (IsInfinite()) return std::nullopt;
    out = extras_;
  } else {
    for (Element x : extras_) {
      if (!other.InnerContains(x)) out.push_back(x);
    }
    if (periodic_) {
      if (!other.periodic_) return std::nullopt;
      const std::uint64_t period =
          Lcm(periodic_->period, other.periodic_->period);
      std::uint64_t settle = std::max(periodic_->start, other.periodic_->start);
      if (!other.extras_.empty()) {
        settle = std::max(settle, other.extras_.back() + 1);
      }
      bool infinite = false;
      ForEachBelow(*periodic_, settle + period, [&](Element x) {
        if (other.InnerContains(x)) return true;
        if (x >= settle) {
          infinite = true;
          return false;
        }
        out.push_back(x);
        return true;
      });
      if (infinite) return std::nullopt;
    }
    std::sort(out.begin(), out.end());
  }
  if (tag_) {
    for (auto& x : out) x = CantorPair(x, *tag_);
  }
  return out;
}

bool Language::Contains(Element x) const {
  if (const auto* set = closed_form()) return set->Contains(x);
  return predicate()->member(x);
}

Element Language::Nth(std::uint64_t j) const {
  if (const auto* set = closed_form()) return set->Nth(j);
  if (j == 0) throw Error(ErrorCode::kInvalidArgument, "indices are 1-based");
  const PredicateSet& p = *predicate();
  std::uint64_t seen = 0;
  for (Element x = 1; x <= p.scan_budget; ++x) {
    if (p.member(x) && ++seen == j) return x;
  }
  throw Error(ErrorCode::kEnumerationBudget,
              label_ + ": member " + std::to_string(j) + " not found within " +
                  std::to_string(p.scan_budget) + " candidates");
}

std::vector<Element> Language::Prefix(std::size_t count) const {
  if (const auto* set = closed_form()) return set->Prefix(count);
  std::vector<Element> out;
  const PredicateSet& p = *predicate();
  for (Element x = 1; out.size() < count; ++x) {
    if (x > p.scan_budget) {
      throw Error(ErrorCode::kEnumerationBudget,
                  label_ + ": prefix exceeds scan budget");
    }
    if (p.member(x)) out.push_back(x);
  }
  return out;
}

ClosureDescriptor ClosureDescriptor::ExactFinite(std::vector<Element> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return ClosureDescriptor(std::move(elements));
}

ClosureDescriptor ClosureDescriptor::Infinite(ClosedFormSet set) {
  if (!set.IsInfinite()) {
    return ExactFinite(set.IsEmpty() ? std::vector<Element>{}
                                     : set.Prefix(set.extras().size()));
  }
  return ClosureDescriptor(std::move(set));
}

ClosureDescriptor ClosureDescriptor::InfiniteScan(std::vector<Language> members,
                                                  std::uint64_t scan_budget) {
  return ClosureDescriptor(Scan{std::move(members), scan_budget});
}

bool ClosureDescriptor::is_infinite() const {
  return !std::holds_alternative<std::vector<Element>>(repr_);
}

const std::vector<Element>& ClosureDescriptor::elements() const {
  if (const auto* v = std::get_if<std::vector<Element>>(&repr_)) return *v;
  throw Error(ErrorCode::kInvalidArgument,
              "elements() called on an infinite closure");
}

bool ClosureDescriptor::Contains(Element x) const {
  return std::visit(
      [x](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, std::vector<Element>>) {
          return std::binary_search(r.begin(), r.end(), x);
        } else if constexpr (std::is_same_v<T, ClosedFormSet>) {
          return r.Contains(x);
        } else {
          return std::all_of(r.members.begin(), r.members.end(),
                             [x](const Language& l) { return l.Contains(x); });
        }
      },
      repr_);
}

Element ClosureDescriptor::Nth(std::uint64_t j) const {
  if (j == 0) throw Error(ErrorCode::kInvalidArgument, "indices are 1-based");
  if (const auto* v = std::get_if<std::vector<Element>>(&repr_)) {
    if (j > v->size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "past end of finite closure");
    }
    return (*v)[j - 1];
  }
  if (const auto* s = std::get_if<ClosedFormSet>(&repr_)) return s->Nth(j);
  const Scan& scan = std::get<Scan>(repr_);
  std::uint64_t seen = 0;
  for (Element x = 1; x <= scan.scan_budget; ++x) {
    if (Contains(x) && ++seen == j) return x;
  }
  throw Error(ErrorCode::kEnumerationBudget,
              "intersection member " + std::to_string(j) +
                  " not found within scan budget");
}

std::vector<Element> ClosureDescriptor::Prefix(std::size_t count) const {
  if (const auto* v = std::get_if<std::vector<Element>>(&repr_)) {
    return std::vector<Element>(v->begin(),
                                v->begin() + std::min(count, v->size()));
  }
  if (const auto* s = std::get_if<ClosedFormSet>(&repr_)) return s->Prefix(count);
  const Scan& scan = std::get<Scan>(repr_);
  std::vector<Element> out;
  for (Element x = 1; out.size() < count; ++x) {
    if (x > scan.scan_budget) {
      throw Error(ErrorCode::kEnumerationBudget,
                  "intersection prefix exceeds scan budget");
    }
    if (Contains(x)) out.push_back(x);
  }
  return out;
}

}  // namespace dplimit
