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

// Acceptance checks. Each criterion prints one PASS/FAIL line; the process
// exits non-zero if any requested criterion fails.
//
//   acceptance_test [criterion ...]   (no argument runs every criterion)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dplimit/audit.h"
#include "dplimit/collection.h"
#include "dplimit/experiment.h"
#include "dplimit/fixtures.h"
#include "dplimit/generation.h"
#include "dplimit/identification.h"
#include "dplimit/mechanisms.h"
#include "dplimit/streams.h"

namespace dplimit {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

Outcome Budget() {
  bool ok = true;
  std::ostringstream detail;
  for (double eps : {0.5, 1.0, 2.0}) {
    const BudgetSchedule sched(eps);
    double sum = 0.0;
    for (std::uint64_t s = 1; s <= 1'000'000; ++s) {
      sum += sched.Epsilon(s);
      if (sum > eps) ok = false;
    }
    ok = ok && sum >= 0.9999 * eps && sched.PartialSum(1'000'000) <= eps;
    double ledger = 0.0;
    for (const Alg1LedgerRow& r : Alg1PrivacyLedger(~0ULL, eps)) {
      ledger += r.epsilon;
      if (ledger > eps) ok = false;
    }
    detail << " eps=" << eps << " S(1e6)/eps=" << sum / eps
           << " alg1/eps=" << ledger / eps;
  }
  return {ok, detail.str()};
}

Outcome ExactDp() {
  bool ok = true;
  std::ostringstream detail;
  AuditOptions opts;
  opts.pairs = 100;
  opts.group_sizes = {1, 2, 3};
  for (const char* spec : {"sperner:4", "sperner:5", "disjoint_union:3"}) {
    RunConfig c;
    c.collection = CollectionSpec::Parse(spec);
    c.algorithm = Algorithm::kUniformFinite;
    std::size_t passed = 0;
    const auto rows = AuditPrivacy(c, opts);
    for (const AuditRow& r : rows) passed += r.pass;
    ok = ok && passed == rows.size();
    detail << ' ' << spec << ' ' << passed << '/' << rows.size();
  }
  RunConfig c;
  c.collection = CollectionSpec::Parse("dyadic");
  c.algorithm = Algorithm::kAlg2;
  opts.max_epoch = 8;
  const auto rows = AuditPrivacy(c, opts);
  std::size_t passed = 0;
  for (const AuditRow& r : rows) passed += r.pass;
  ok = ok && passed == rows.size() && rows.size() == 8 * 3 - 1;
  detail << " alg2/dyadic s<=8 " << passed << '/' << rows.size();
  return {ok, detail.str()};
}

Outcome UbFinite() {
  const auto cells = SampleComplexitySweep(CollectionSpec::Parse("sperner:4"),
                                           {2.0}, {10, 20, 40}, 1000);
  bool ok = true;
  std::ostringstream detail;
  for (const SweepCell& cell : cells) {
    ok = ok && cell.success >= cell.bound - 0.03;
    detail << " n=" << cell.n << " success=" << cell.success
           << " bound=" << cell.bound;
  }
  return {ok, detail.str()};
}

Outcome Alg1() {
  bool ok = true;
  std::ostringstream detail;
  std::uint64_t early = 0, late = 0;
  for (auto [spec, target] : {std::pair{"threshold", 5}, std::pair{"sperner:4", 1}}) {
    RunConfig c;
    c.collection = CollectionSpec::Parse(spec);
    c.stream.target = target;
    c.algorithm = Algorithm::kAlg1;
    c.epsilon = 1.0;
    c.horizon = 10'000;
    c.burn_in = 5000;
    std::uint64_t good = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto steps = RunSeed(c, seed);
      good += MetricsFromSteps(steps, seed, 5000).success;
      for (const StepRecord& s : steps) {
        if (s.correct) continue;
        if (s.t > 2048 && s.t <= 4096) ++early;
        if (s.t > 4096 && s.t <= 8192) ++late;
      }
    }
    ok = ok && good >= 0.95 * 50;
    detail << ' ' << spec << " success=" << good << "/50";
  }
  ok = ok && late <= early;
  detail << " mistakes(2^11,2^12]=" << early << " (2^12,2^13]=" << late;
  return {ok, detail.str()};
}

// Fraction of seeds whose output is correct at every release t = 2^s with
// s in [lo, hi].
double EpochSuccess(const RunConfig& c, std::uint64_t seeds, std::uint64_t lo,
                    std::uint64_t hi) {
  std::uint64_t good = 0;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const auto steps = RunSeed(c, seed);
    bool all = true;
    for (std::uint64_t s = lo; s <= hi; ++s) all = all && steps[(1ULL << s) - 1].correct;
    good += all;
  }
  return static_cast<double>(good) / static_cast<double>(seeds);
}

double Alg2Empirical() {
  RunConfig c;
  c.collection = CollectionSpec::Parse("dyadic");
  c.stream.target = 2;
  c.algorithm = Algorithm::kAlg2;
  c.epsilon = 1.0;
  c.horizon = 1ULL << 16;
  return EpochSuccess(c, 200, 12, 16);
}

Outcome Alg2EmpiricalOnly() {
  const double rate = Alg2Empirical();
  return {rate >= 0.99, Fmt("dyadic target 2, epochs 12..16 success=%.3f", rate)};
}

Outcome Alg2Full() {
  const double rate = Alg2Empirical();
  const double bound = Alg2ErrorBound(12, 1.0);
  return {rate >= 0.99 && bound <= 1e-6,
          Fmt("success=%.3f, closed-form epoch bound at s=12 is %.6g (needs <= 1e-6)",
              rate, bound)};
}

double Alg3Sensitivity() {
  const Collection threshold = MakeThresholdCollection();
  CounterRng rng = CounterRng(1).Fork("acceptance/alg3");
  double worst = 0.0;
  for (int trial = 0; trial < 10'000; ++trial) {
    StreamSpec spec;
    spec.kind = StreamKind::kIid;
    spec.target = 1 + rng.UniformInt(8);
    spec.seed = static_cast<std::uint64_t>(trial);
    const std::uint64_t s = 1 + rng.UniformInt(6);
    const auto x = MaterializeStream(threshold, spec, 1ULL << s);
    const NeighborPair p = RandomNeighborPair(x, 1, threshold.language(1), rng, 16);
    const std::size_t i = 1 + rng.UniformInt(16);
    worst = std::max(worst, std::abs(Alg3Utility(threshold, p.first, s, i) -
                                     Alg3Utility(threshold, p.second, s, i)));
  }
  return worst;
}

Outcome Alg3SensitivityOnly() {
  const double worst = Alg3Sensitivity();
  return {worst <= 3.0, Fmt("max utility change over 1e4 neighbor pairs = %g", worst)};
}

Outcome Alg3Full() {
  RunConfig c;
  c.collection = CollectionSpec::Parse("threshold");
  c.stream.kind = StreamKind::kIid;
  c.stream.target = 3;
  c.algorithm = Algorithm::kAlg3;
  c.epsilon = 1.0;
  c.horizon = 1ULL << 14;
  const double rate = EpochSuccess(c, 200, 10, 14);
  const double worst = Alg3Sensitivity();
  return {rate >= 0.95 && worst <= 3.0,
          Fmt("threshold target 3 iid, epochs 10..14 success=%.3f, sensitivity=%g",
              rate, worst)};
}

Outcome Barrier() {
  RunConfig c;
  c.collection = CollectionSpec::Parse("pair_subset");
  c.stream.kind = StreamKind::kSwapAdversary;
  c.stream.source = 1;
  c.stream.target = 2;
  c.algorithm = Algorithm::kAlg2;
  c.horizon = 4096;
  const SwapSchedule schedule;
  std::uint64_t good = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto steps = RunSeed(c, seed);
    bool every = true;
    for (std::size_t k = 1; k <= 6; ++k) {
      const std::uint64_t tk = schedule.Time(k);
      bool mistake = false;
      for (std::uint64_t t = tk; t <= steps.size() && !mistake; ++t) {
        mistake = !steps[t - 1].correct;
      }
      every = every && mistake;
    }
    good += every;
  }
  return {good >= 50, Fmt("seeds with a mistake after every T_k, k=1..6: %g/100",
                          static_cast<double>(good))};
}

Outcome SweepTrend() {
  const std::vector<double> eps = {0.5, 1.0, 2.0};
  const std::vector<std::uint64_t> ns = {2,  3,  4,  6,  8,   10,  12,  16,
                                         20, 24, 28, 32, 40,  48,  56,  64,
                                         80, 96, 112, 128, 160, 192, 256, 320};
  std::map<std::pair<std::size_t, double>, std::uint64_t> smallest;
  std::ostringstream detail;
  bool ok = true;
  for (std::size_t k : {4, 6}) {
    const auto cells = SampleComplexitySweep(
        CollectionSpec::Parse("sperner:" + std::to_string(k)), eps, ns, 400);
    for (double e : eps) {
      const auto n = SmallestSuccessfulN(cells, e, 2.0 / 3.0);
      if (!n) {
        ok = false;
        detail << " k=" << k << " eps=" << e << " n=none";
        continue;
      }
      smallest[{k, e}] = *n;
      detail << " k=" << k << " eps=" << e << " n=" << *n;
    }
  }
  if (!ok) return {false, detail.str()};
  for (std::size_t k : {4, 6}) {
    ok = ok && smallest[{k, 0.5}] >= smallest[{k, 1.0}] &&
         smallest[{k, 1.0}] >= smallest[{k, 2.0}];
  }
  for (double e : eps) ok = ok && smallest[{4, e}] <= smallest[{6, e}];
  return {ok, detail.str()};
}

Outcome Fixtures() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t k = 2; k <= 6; ++k) {
    const Collection c = MakeSpernerCollection(k);
    const auto subsets = SpernerSubsets(k);
    const std::uint64_t n = subsets.size();
    for (std::size_t j = 1; j <= n; ++j) {
      const ClosureDescriptor cl = Closure(c, subsets[j - 1]);
      for (Element x = 1; x <= 10 * n; ++x) ok = ok && cl.Contains(x) == (x % n == j % n);
    }
  }
  detail << "closure law k<=6 " << (ok ? "ok" : "broken");
  for (std::size_t k = 2; k <= 8; ++k) {
    ok = ok && ClosureDimension(MakeSpernerCollection(k)) == 0;
  }
  detail << ", closure dimension 0 for k<=8";
  for (std::size_t k = 2; k <= 8; ++k) {
    const auto subsets = SpernerSubsets(k);
    for (std::size_t a = 0; a < subsets.size(); ++a) {
      for (std::size_t b = 0; b < subsets.size(); ++b) {
        if (a != b) {
          ok = ok && !std::includes(subsets[b].begin(), subsets[b].end(),
                                    subsets[a].begin(), subsets[a].end());
        }
      }
    }
  }
  detail << ", antichain k<=8";
  const Collection dyadic = MakeDyadicCollection();
  for (Element x = 1; x <= 10'000; ++x) {
    int hits = 0;
    for (std::size_t i = 1; i <= 15; ++i) hits += dyadic.Contains(i, x);
    ok = ok && hits == 1;
  }
  detail << ", dyadic partition of 1..10^4";
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < 10.0;
  detail << Fmt(", %.2fs", secs);
  return {ok, detail.str()};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& Criteria() {
  static const auto* kCriteria =
      new std::vector<std::pair<std::string, std::function<Outcome()>>>{
          {"budget", Budget},
          {"exact_dp", ExactDp},
          {"ub_finite", UbFinite},
          {"alg1", Alg1},
          {"alg2", Alg2Full},
          {"alg2_empirical", Alg2EmpiricalOnly},
          {"alg3", Alg3Full},
          {"alg3_sensitivity", Alg3SensitivityOnly},
          {"barrier", Barrier},
          {"sweep_trend", SweepTrend},
          {"fixtures", Fixtures},
      };
  return *kCriteria;
}

}  // namespace
}  // namespace dplimit

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  bool all_pass = true;
  for (const auto& [name, check] : dplimit::Criteria()) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), name) == wanted.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    dplimit::Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s: %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL", name.c_str(),
                outcome.detail.c_str(), secs);
    all_pass = all_pass && outcome.pass;
  }
  for (const std::string& w : wanted) {
    bool known = false;
    for (const auto& c : dplimit::Criteria()) known = known || c.first == w;
    if (!known) {
      std::printf("FAIL %s: unknown criterion\n", w.c_str());
      all_pass = false;
    }
  }
  return all_pass ? 0 : 1;
}
