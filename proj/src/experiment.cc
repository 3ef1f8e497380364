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

#include "dplimit/experiment.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_set>

#include "dplimit/audit.h"
#include "dplimit/error.h"
#include "dplimit/identification.h"
#include "dplimit/mechanisms.h"
#include "json.hpp"

namespace dplimit {

namespace {

using nlohmann::json;

// Everything one seed produces.
struct SeedRun {
  std::vector<StepRecord> steps;
  std::vector<std::string> trace;
  MechanismTranscript transcript;
  std::string run_id;
};

std::string FormatDouble(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string RunId(const RunConfig& config, std::uint64_t seed) {
  return std::string(AlgorithmName(config.algorithm)) + "-" +
         config.collection.ToString() + "-seed" + std::to_string(seed);
}

int ClosureDimensionFor(const Collection& collection) {
  if (auto d = collection.traits().closure_dimension_bound) return *d;
  return ClosureDimension(collection);
}

SubsetOptions SubsetOptionsFor(const RunConfig& config,
                               const Collection& collection) {
  SubsetOptions options;
  options.closure_dimension = ClosureDimensionFor(collection);
  options.log_base = config.log_base;
  return options;
}

std::string GenerationTraceRow(const std::string& run_id, const GenStep& step,
                               bool correct) {
  std::ostringstream os;
  os << run_id << ',' << step.t << ',' << (step.released ? 1 : 0) << ','
     << step.k << ',' << step.J_t << ',';
  if (step.output) os << *step.output;
  os << ',' << (correct ? 1 : 0) << ','
     << FormatDouble(step.epsilon_spent_cumulative);
  return os.str();
}

std::string IdentificationTraceRow(const std::string& run_id, const IdStep& step,
                                   std::size_t target) {
  std::ostringstream os;
  os << run_id << ',' << step.t << ',' << step.epoch << ',' << step.output_index
     << ',' << target << ',' << (step.output_index != target ? 1 : 0) << ','
     << FormatDouble(step.epsilon_spent_cumulative);
  return os.str();
}

SeedRun RunSeedFull(const RunConfig& config, std::uint64_t seed) {
  const Collection collection = config.collection.Build();
  StreamSpec stream_spec = config.stream;
  stream_spec.seed = seed;
  Stream stream(collection, stream_spec);
  const std::size_t target = stream.target();
  const Language target_language = collection.language(target);
  CounterRng rng = CounterRng(seed).Fork(AlgorithmName(config.algorithm));

  SeedRun run;
  run.run_id = RunId(config, seed);
  auto add_release = [&](std::uint64_t s, double spent, std::uint64_t output) {
    TranscriptRow row;
    row.run_id = run.run_id;
    row.release_s = s;
    row.epsilon_spent = spent;
    row.output_index = output;
    row.seed = seed;
    row.lineage = rng.lineage();
    run.transcript.Add(std::move(row));
  };

  std::unordered_set<Element> seen, emitted;
  auto judge = [&](const std::optional<Element>& output) {
    const bool ok = output && target_language.Contains(*output) &&
                    !seen.count(*output) && !emitted.count(*output);
    if (output) emitted.insert(*output);
    return ok;
  };
  auto record_gen = [&](const GenStep& step) {
    const bool ok = judge(step.output);
    run.steps.push_back({step.t, step.k, step.output, ok,
                         step.epsilon_spent_cumulative});
    run.trace.push_back(GenerationTraceRow(run.run_id, step, ok));
  };
  auto record_id = [&](const IdStep& step) {
    run.steps.push_back({step.t, step.epoch, step.output_index,
                         step.output_index == target,
                         step.epsilon_spent_cumulative});
    run.trace.push_back(IdentificationTraceRow(run.run_id, step, target));
  };

  switch (config.algorithm) {
    case Algorithm::kAlg1: {
      PrivateApproximateIntersection alg(collection, config.epsilon, rng);
      double prev = 0.0;
      for (std::uint64_t t = 1; t <= config.horizon; ++t) {
        const Element x = stream.Next();
        seen.insert(x);
        const GenStep step = alg.Step(x);
        if (step.released) {
          add_release(step.k, step.epsilon_spent_cumulative - prev, step.J_t);
          prev = step.epsilon_spent_cumulative;
        }
        record_gen(step);
      }
      break;
    }
    case Algorithm::kUniformFinite: {
      const SubsetScorer scorer(collection);
      std::vector<Element> prefix;
      for (std::uint64_t t = 1; t <= config.horizon; ++t) {
        prefix.push_back(stream.Next());
        seen.insert(prefix.back());
      }
      const FiniteSampleResult result = UniformGenerateFiniteSample(
          scorer, prefix, config.epsilon, SubsetOptionsFor(config, collection),
          rng);
      GenStep step;
      step.t = config.horizon;
      step.released = true;
      step.k = 1;
      step.J_t = static_cast<std::size_t>(std::popcount(result.subset));
      step.output = result.element;
      step.epsilon_spent_cumulative = config.epsilon;
      add_release(1, config.epsilon, result.subset);
      record_gen(step);
      break;
    }
    case Algorithm::kUniformContinual: {
      UniformContinualGenerator alg(collection, config.epsilon,
                                    SubsetOptionsFor(config, collection), rng);
      double prev = 0.0;
      for (std::uint64_t t = 1; t <= config.horizon; ++t) {
        const Element x = stream.Next();
        seen.insert(x);
        const GenStep step = alg.Step(x);
        if (step.released) {
          add_release(step.k, step.epsilon_spent_cumulative - prev, step.J_t);
          prev = step.epsilon_spent_cumulative;
        }
        record_gen(step);
      }
      break;
    }
    case Algorithm::kAlg2: {
      IdentifierOptions options;
      options.allow_duplicates = config.allow_duplicates;
      EpochExponentialIdentifier alg(collection, config.epsilon, rng, options);
      double prev = 0.0;
      for (std::uint64_t t = 1; t <= config.horizon; ++t) {
        const IdStep step = alg.Step(stream.Next());
        if (step.released) {
          add_release(step.epoch, step.epsilon_spent_cumulative - prev,
                      step.output_index);
          prev = step.epsilon_spent_cumulative;
        }
        record_id(step);
      }
      break;
    }
    case Algorithm::kAlg3: {
      PrivateStochasticIdentifier alg(collection, config.epsilon, rng);
      double prev = 0.0;
      for (std::uint64_t t = 1; t <= config.horizon; ++t) {
        const IdStep step = alg.Step(stream.Next());
        if (step.released) {
          add_release(step.epoch, step.epsilon_spent_cumulative - prev,
                      step.output_index);
          prev = step.epsilon_spent_cumulative;
        }
        record_id(step);
      }
      break;
    }
  }
  return run;
}

void WriteStepRows(std::ostream& out, const std::string& run_id,
                   const std::vector<StepRecord>& steps, std::uint64_t seed) {
  for (const StepRecord& s : steps) {
    out << run_id << ',' << s.t << ',' << s.epoch << ',';
    if (s.output) out << *s.output;
    out << ',' << (s.correct ? 1 : 0) << ',' << (s.correct ? 0 : 1) << ','
        << FormatDouble(s.epsilon_cum) << ',' << seed << '\n';
  }
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::uint64_t ParseU64(const std::string& s) {
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size()) throw Error(ErrorCode::kInvalidArgument, "bad integer " + s);
  return v;
}

// Random duplicate-free prefix: n distinct members among the first 4n
// elements of `language`.
std::vector<Element> RandomPrefix(const Language& language, std::uint64_t n,
                                  CounterRng& rng) {
  std::vector<Element> pool = language.Prefix(4 * n);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(n);
  return pool;
}

// Replaces c random positions by elements from [1, 8n + 8] not in the prefix.
std::vector<Element> RandomNeighbor(const std::vector<Element>& prefix,
                                    std::size_t c, CounterRng& rng) {
  std::set<Element> present(prefix.begin(), prefix.end());
  Element top = 8 * prefix.size() + 8;
  if (!present.empty()) top = std::max(top, 2 * *present.rbegin());
  std::set<std::size_t> positions;
  while (positions.size() < c) positions.insert(rng.UniformInt(prefix.size()));
  std::vector<Element> out = prefix;
  for (std::size_t p : positions) {
    Element x;
    do {
      x = 1 + rng.UniformInt(top);
    } while (present.count(x));
    present.insert(x);
    out[p] = x;
  }
  return out;
}

}  // namespace

const char* AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kAlg1:
      return "alg1";
    case Algorithm::kUniformFinite:
      return "uniform_finite";
    case Algorithm::kUniformContinual:
      return "uniform_continual";
    case Algorithm::kAlg2:
      return "alg2";
    case Algorithm::kAlg3:
      return "alg3";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kAlg1, Algorithm::kUniformFinite,
                      Algorithm::kUniformContinual, Algorithm::kAlg2,
                      Algorithm::kAlg3}) {
    if (name == AlgorithmName(a)) return a;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown algorithm '" + std::string(name) + "'");
}

bool IsGenerator(Algorithm algorithm) {
  return algorithm == Algorithm::kAlg1 ||
         algorithm == Algorithm::kUniformFinite ||
         algorithm == Algorithm::kUniformContinual;
}

std::uint64_t DefaultBurnIn(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kAlg1:
      return 5000;
    case Algorithm::kUniformFinite:
      return 0;
    case Algorithm::kUniformContinual:
      return 1024;
    case Algorithm::kAlg2:
      return 1ULL << 12;
    case Algorithm::kAlg3:
      return 1ULL << 10;
  }
  return 0;
}

void RunConfig::Validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
  if (horizon == 0) throw Error(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "seeds must be non-empty");
  const Collection collection = this->collection.Build();
  if (stream.target == 0 ||
      (collection.size() && stream.target > *collection.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "target index " + std::to_string(stream.target) +
                    " outside " + collection.name());
  }
  if (stream.kind == StreamKind::kSwapAdversary && stream.source == 0) {
    throw Error(ErrorCode::kInvalidArgument, "swap adversary needs a source");
  }
  switch (algorithm) {
    case Algorithm::kUniformFinite:
    case Algorithm::kUniformContinual:
      if (!collection.is_finite()) {
        throw Error(ErrorCode::kIncompatibleConfig,
                    std::string(AlgorithmName(algorithm)) +
                        " needs a finite collection");
      }
      break;
    case Algorithm::kAlg2:
      if (!collection.traits().overlap) {
        throw Error(ErrorCode::kIncompatibleConfig,
                    "alg2 needs a declared overlap function");
      }
      break;
    case Algorithm::kAlg3:
      if (!collection.traits().telltale) {
        throw Error(ErrorCode::kIncompatibleConfig,
                    "alg3 needs tell-tales; " + collection.name() + " has none");
      }
      break;
    case Algorithm::kAlg1:
      break;
  }
}

std::string RunConfig::ToJson() const {
  json j;
  j["collection"] = collection.ToString();
  j["stream"] = {{"kind", StreamKindName(stream.kind)},
                 {"target", stream.target},
                 {"source", stream.source},
                 {"swap_times", stream.swap_times},
                 {"block", stream.block},
                 {"delay", stream.delay},
                 {"geometric_p", stream.geometric_p}};
  j["algorithm"] = AlgorithmName(algorithm);
  j["epsilon"] = epsilon;
  j["horizon"] = horizon;
  j["seeds"] = seeds;
  j["out"] = out;
  j["burn_in"] = burn_in ? json(*burn_in) : json(nullptr);
  j["allow_duplicates"] = allow_duplicates;
  j["log_base"] = log_base == LogBase::kNatural ? "e" : "2";
  return j.dump(2) + "\n";
}

RunConfig RunConfig::FromJson(const std::string& text) {
  static const std::set<std::string> kTop = {
      "collection", "stream", "algorithm", "epsilon", "horizon", "seeds",
      "out", "burn_in", "allow_duplicates", "log_base"};
  static const std::set<std::string> kStream = {
      "kind", "target", "source", "swap_times", "block", "delay", "geometric_p"};
  RunConfig config;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be an object");
    for (const auto& [key, value] : j.items()) {
      if (!kTop.count(key)) {
        throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
      }
    }
    if (j.contains("collection")) {
      const json& c = j["collection"];
      if (c.is_string()) {
        config.collection = CollectionSpec::Parse(c.get<std::string>());
      } else {
        CollectionSpec spec;
        spec.family = c.at("family").get<std::string>();
        spec.k = c.value("k", std::size_t{0});
        spec.common = c.value("common", std::size_t{0});
        spec.k_max = c.value("k_max", std::size_t{0});
        config.collection = CollectionSpec::Parse(spec.ToString());
      }
    }
    if (j.contains("stream")) {
      const json& s = j["stream"];
      for (const auto& [key, value] : s.items()) {
        if (!kStream.count(key)) {
          throw Error(ErrorCode::kInvalidArgument, "unknown stream key '" + key + "'");
        }
      }
      StreamSpec& st = config.stream;
      if (s.contains("kind")) st.kind = ParseStreamKind(s["kind"].get<std::string>());
      st.target = s.value("target", st.target);
      st.source = s.value("source", st.source);
      st.swap_times = s.value("swap_times", st.swap_times);
      st.block = s.value("block", st.block);
      st.delay = s.value("delay", st.delay);
      st.geometric_p = s.value("geometric_p", st.geometric_p);
    }
    if (j.contains("algorithm")) {
      config.algorithm = ParseAlgorithm(j["algorithm"].get<std::string>());
    }
    config.epsilon = j.value("epsilon", config.epsilon);
    config.horizon = j.value("horizon", config.horizon);
    if (j.contains("seeds")) {
      config.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    }
    config.out = j.value("out", config.out);
    if (j.contains("burn_in") && !j["burn_in"].is_null()) {
      config.burn_in = j["burn_in"].get<std::uint64_t>();
    }
    config.allow_duplicates = j.value("allow_duplicates", config.allow_duplicates);
    if (j.contains("log_base")) {
      const std::string base = j["log_base"].get<std::string>();
      if (base == "e") {
        config.log_base = LogBase::kNatural;
      } else if (base == "2") {
        config.log_base = LogBase::kTwo;
      } else {
        throw Error(ErrorCode::kInvalidArgument, "log_base must be \"e\" or \"2\"");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("config: ") + e.what());
  }
  return config;
}

double RunMetrics::success_rate() const {
  if (seeds.empty()) return 0.0;
  const auto ok = std::count_if(seeds.begin(), seeds.end(),
                                [](const SeedMetrics& m) { return m.success; });
  return static_cast<double>(ok) / static_cast<double>(seeds.size());
}

std::optional<double> RunMetrics::median_last_mistake_time() const {
  std::vector<double> times;
  for (const SeedMetrics& m : seeds) {
    if (m.last_mistake_time) times.push_back(static_cast<double>(*m.last_mistake_time));
  }
  if (times.empty()) return std::nullopt;
  std::sort(times.begin(), times.end());
  const std::size_t h = times.size() / 2;
  return times.size() % 2 ? times[h] : (times[h - 1] + times[h]) / 2.0;
}

std::vector<StepRecord> RunSeed(const RunConfig& config, std::uint64_t seed) {
  return RunSeedFull(config, seed).steps;
}

SeedMetrics MetricsFromSteps(const std::vector<StepRecord>& steps,
                             std::uint64_t seed, std::uint64_t burn_in) {
  SeedMetrics m;
  m.seed = seed;
  m.success = true;
  for (const StepRecord& s : steps) {
    if (!s.correct) {
      ++m.mistake_count;
      m.last_mistake_time = s.t;
      if (s.t > burn_in) m.success = false;
    }
    m.epsilon_spent = s.epsilon_cum;
  }
  return m;
}

RunMetrics RunExperiment(const RunConfig& config) {
  config.Validate();
  namespace fs = std::filesystem;
  const bool write = !config.out.empty();
  std::vector<fs::path> written;
  bool created_dir = false;
  const fs::path dir(config.out);
  RunMetrics metrics;
  try {
    std::ofstream steps, trace, transcript;
    auto open = [&](std::ofstream& f, const char* name) {
      written.push_back(dir / name);
      f.open(written.back());
      if (!f) throw Error(ErrorCode::kIo, "cannot write " + written.back().string());
    };
    if (write) {
      if (!fs::exists(dir)) created_dir = fs::create_directories(dir);
      open(steps, "steps.csv");
      open(trace, "trace.csv");
      open(transcript, "transcript.csv");
      steps << "run_id,t,epoch,output,correct,mistake,epsilon_cum,seed\n";
      trace << (IsGenerator(config.algorithm)
                    ? "run_id,t,released,k,J_t,output_element,correct,"
                      "epsilon_spent_cumulative\n"
                    : "run_id,t,epoch_s,output_index,target_index,mistake,"
                      "epsilon_spent_cumulative\n");
      transcript << "run_id,release_s,epsilon_spent,output_index,seed\n";
    }
    for (std::uint64_t seed : config.seeds) {
      SeedRun run = RunSeedFull(config, seed);
      metrics.seeds.push_back(
          MetricsFromSteps(run.steps, seed, config.effective_burn_in()));
      if (!write) continue;
      WriteStepRows(steps, run.run_id, run.steps, seed);
      for (const std::string& row : run.trace) trace << row << '\n';
      run.transcript.WriteCsv(transcript, /*header=*/false);
    }
    if (write) {
      std::ofstream summary, cfg;
      open(summary, "summary.csv");
      WriteSummaryCsv(summary, metrics);
      open(cfg, "config.json");
      cfg << config.ToJson();
      for (auto* f : {&steps, &trace, &transcript, &summary, &cfg}) {
        f->flush();
        if (!*f) throw Error(ErrorCode::kIo, "write failed");
      }
    }
  } catch (...) {
    std::error_code ec;
    for (const fs::path& p : written) fs::remove(p, ec);
    if (created_dir) fs::remove(dir, ec);
    throw;
  }
  return metrics;
}

void WriteSummaryCsv(std::ostream& out, const RunMetrics& metrics) {
  out << "seed,last_mistake_time,mistake_count,success,epsilon_spent\n";
  for (const SeedMetrics& m : metrics.seeds) {
    out << m.seed << ',';
    if (m.last_mistake_time) out << *m.last_mistake_time;
    out << ',' << m.mistake_count << ',' << (m.success ? 1 : 0) << ','
        << FormatDouble(m.epsilon_spent) << '\n';
  }
}

RunMetrics MetricsFromStepsCsv(std::istream& in, std::uint64_t burn_in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "run_id,t,epoch,output,correct,mistake,epsilon_cum,seed") {
    throw Error(ErrorCode::kInvalidArgument, "not a step CSV");
  }
  RunMetrics metrics;
  std::vector<StepRecord> steps;
  std::optional<std::uint64_t> current;
  auto flush = [&] {
    if (current) metrics.seeds.push_back(MetricsFromSteps(steps, *current, burn_in));
    steps.clear();
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsv(line);
    if (f.size() != 8) throw Error(ErrorCode::kInvalidArgument, "bad step row: " + line);
    const std::uint64_t seed = ParseU64(f[7]);
    if (current != seed) {
      flush();
      current = seed;
    }
    StepRecord s;
    s.t = ParseU64(f[1]);
    s.epoch = ParseU64(f[2]);
    if (!f[3].empty()) s.output = ParseU64(f[3]);
    s.correct = f[4] == "1";
    s.epsilon_cum = std::stod(f[6]);
    steps.push_back(s);
  }
  flush();
  return metrics;
}

std::vector<SweepCell> SampleComplexitySweep(
    const CollectionSpec& collection_spec, const std::vector<double>& epsilons,
    const std::vector<std::uint64_t>& ns, std::uint64_t seeds,
    std::uint64_t base_seed) {
  const Collection collection = collection_spec.Build();
  const SubsetScorer scorer(collection);
  SubsetOptions options;
  options.closure_dimension = ClosureDimensionFor(collection);
  const std::size_t k = scorer.k();
  std::vector<SweepCell> cells;
  for (double eps : epsilons) {
    for (std::uint64_t n : ns) {
      SweepCell cell;
      cell.epsilon = eps;
      cell.n = n;
      cell.bound = 1.0 - 5.0 * std::exp(-eps * (static_cast<double>(n) -
                                                options.closure_dimension) /
                                        (2.0 * static_cast<double>(k)));
      cell.success = 1.0;
      for (std::size_t target = 1; target <= k; ++target) {
        const Language language = collection.language(target);
        const std::vector<Element> prefix = language.Prefix(n);
        const std::set<Element> seen(prefix.begin(), prefix.end());
        std::uint64_t ok = 0;
        for (std::uint64_t s = 0; s < seeds; ++s) {
          CounterRng rng = CounterRng(base_seed + s)
                               .Fork("sweep")
                               .Fork(static_cast<std::uint64_t>(target));
          const FiniteSampleResult r =
              UniformGenerateFiniteSample(scorer, prefix, eps, options, rng);
          if (r.element && language.Contains(*r.element) && !seen.count(*r.element)) {
            ++ok;
          }
        }
        cell.success = std::min(cell.success, static_cast<double>(ok) /
                                                  static_cast<double>(seeds));
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepCell>& cells) {
  out << "epsilon,n,success,bound\n";
  for (const SweepCell& c : cells) {
    out << FormatDouble(c.epsilon) << ',' << c.n << ',' << FormatDouble(c.success)
        << ',' << FormatDouble(c.bound) << '\n';
  }
}

std::optional<std::uint64_t> SmallestSuccessfulN(
    const std::vector<SweepCell>& cells, double epsilon, double level) {
  std::optional<std::uint64_t> best;
  for (const SweepCell& c : cells) {
    if (c.epsilon == epsilon && c.success >= level && (!best || c.n < *best)) {
      best = c.n;
    }
  }
  return best;
}

std::vector<AuditRow> AuditPrivacy(const RunConfig& config,
                                   const AuditOptions& options) {
  const Collection collection = config.collection.Build();
  CounterRng rng = CounterRng(options.seed).Fork("audit");
  std::vector<AuditRow> rows;
  const auto size = collection.size();
  auto random_target = [&] {
    return size ? 1 + rng.UniformInt(*size) : config.stream.target;
  };

  switch (config.algorithm) {
    case Algorithm::kUniformFinite: {
      const SubsetScorer scorer(collection);
      const SubsetOptions subset = SubsetOptionsFor(config, collection);
      for (std::size_t c : options.group_sizes) {
        AuditRow row;
        row.release = "uniform_finite/n=" + std::to_string(options.release_n) +
                      "/c=" + std::to_string(c);
        row.budget = static_cast<double>(c) * config.epsilon;
        row.pass = true;
        for (std::uint64_t p = 0; p < options.pairs; ++p) {
          const auto x = RandomPrefix(collection.language(random_target()),
                                      options.release_n, rng);
          const auto y = RandomNeighbor(x, c, rng);
          const auto check = DpCheckExactLog(
              SubsetLogProbabilities(scorer, x, config.epsilon, subset),
              SubsetLogProbabilities(scorer, y, config.epsilon, subset),
              config.epsilon, c);
          row.measured = std::max(row.measured, check.max_log_ratio);
          row.pass = row.pass && check.pass;
        }
        rows.push_back(row);
      }
      break;
    }
    case Algorithm::kAlg2: {
      const BudgetSchedule schedule(config.epsilon);
      for (std::uint64_t s = 1; s <= options.max_epoch; ++s) {
        for (std::size_t c : options.group_sizes) {
          const std::uint64_t t = 1ULL << s;
          if (c > t) continue;
          AuditRow row;
          row.release = "alg2/s=" + std::to_string(s) + "/c=" + std::to_string(c);
          row.budget = static_cast<double>(c) * schedule.Epsilon(s);
          row.pass = true;
          for (std::uint64_t p = 0; p < options.pairs; ++p) {
            const auto x = RandomPrefix(collection.language(random_target()), t, rng);
            const auto y = RandomNeighbor(x, c, rng);
            const auto check = DpCheckExactLog(
                Alg2ReleaseLogProbabilities(collection, x, s, config.epsilon),
                Alg2ReleaseLogProbabilities(collection, y, s, config.epsilon),
                schedule.Epsilon(s), c);
            row.measured = std::max(row.measured, check.max_log_ratio);
            row.pass = row.pass && check.pass;
          }
          rows.push_back(row);
        }
      }
      break;
    }
    case Algorithm::kAlg1: {
      // Release k = j, where L_j is the first language missing some small
      // element: one counter's miss count moves by 1 between neighbours.
      const double eps0 = 6.0 * config.epsilon / (std::numbers::pi * std::numbers::pi);
      std::uint64_t k = 0;
      const std::uint64_t last = std::min<std::uint64_t>(64, size.value_or(64));
      for (std::uint64_t j = 1; j <= last && k == 0; ++j) {
        const Language lj = collection.language(j);
        for (Element e = 1; e <= 10'000; ++e) {
          if (!lj.Contains(e)) {
            k = j;
            break;
          }
        }
      }
      if (k == 0) {
        throw Error(ErrorCode::kIncompatibleConfig,
                    "no language among the first 64 misses an element <= 10^4");
      }
      const double kd = static_cast<double>(k);
      const double scale = kd * kd * kd / eps0;
      const double budget = eps0 / (kd * kd);
      const std::uint64_t r_x = 0;
      const std::uint64_t r_y = 1;
      auto cell_of = [](double noisy) -> std::size_t {
        static const double kEdges[] = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0};
        std::size_t c = 0;
        while (c < std::size(kEdges) && noisy > kEdges[c]) ++c;
        return c;
      };
      for (bool control : {false, true}) {
        auto run = [&](int which, CounterRng& r) {
          const double count = static_cast<double>(which == 0 ? r_x : r_y);
          const double noise = control ? 0.0 : SampleLaplace(scale, r);
          return cell_of(std::max(0.0, count + noise));
        };
        CounterRng audit_rng = rng.Fork(control ? "control" : "laplace");
        const AuditResult result =
            DpAuditEmpirical(run, 7, options.trials, budget, audit_rng);
        AuditRow row;
        row.release = "alg1/k=" + std::to_string(k) + (control ? "/no-noise" : "");
        row.budget = budget;
        row.measured = result.epsilon_lower;
        row.pass = !result.violation;
        row.control = control;
        rows.push_back(row);
      }
      break;
    }
    default:
      throw Error(ErrorCode::kIncompatibleConfig,
                  std::string("audit supports alg1, alg2 and uniform_finite, not ") +
                      AlgorithmName(config.algorithm));
  }
  return rows;
}

void WriteAuditCsv(std::ostream& out, const std::vector<AuditRow>& rows) {
  out << "release,budget,measured,pass,control\n";
  for (const AuditRow& r : rows) {
    out << r.release << ',' << FormatDouble(r.budget) << ','
        << FormatDouble(r.measured) << ',' << (r.pass ? 1 : 0) << ','
        << (r.control ? 1 : 0) << '\n';
  }
}

}  // namespace dplimit
