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

// Command-line front end: generate | identify | sweep | audit | closure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dplimit/error.h"
#include "dplimit/experiment.h"

namespace {

using dplimit::Error;
using dplimit::ErrorCode;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRun = 3;

// Failure after a valid configuration was accepted.
struct RunFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::string config_path;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> horizon;
  std::string seeds;
  std::optional<std::string> out;
  std::optional<std::string> collection;
  std::optional<std::size_t> target;
  std::optional<std::string> stream;
  std::optional<std::size_t> source;
  std::vector<std::uint64_t> swap_times;
  std::optional<std::string> algorithm;
  std::optional<std::uint64_t> burn_in;
  bool allow_duplicates = false;
  std::optional<std::string> log_base;
};

void AddRunFlags(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "JSON run config");
  app->add_option("--epsilon", o.epsilon, "privacy budget");
  app->add_option("--horizon", o.horizon, "number of stream steps");
  app->add_option("--seeds", o.seeds, "seed count N (seeds 1..N) or list a,b,c");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--collection", o.collection,
                  "sperner:<k>[:<common>] | threshold | dyadic | "
                  "disjoint_union:<k_max> | pair_subset");
  app->add_option("--target", o.target, "target language index (1-based)");
  app->add_option("--stream", o.stream,
                  "canonical | interleaved | delayed | swap_adversary | iid");
  app->add_option("--source", o.source, "swap adversary source language");
  app->add_option("--swap-times", o.swap_times, "explicit swap times")->delimiter(',');
  app->add_option("--algorithm", o.algorithm,
                  "alg1 | uniform_finite | uniform_continual | alg2 | alg3");
  app->add_option("--burn-in", o.burn_in, "burn-in step for success");
  app->add_flag("--allow-duplicates", o.allow_duplicates,
                "tolerate repeated stream elements in alg2");
  app->add_option("--log-base", o.log_base, "base of log 2 in f(n): e | 2");
}

std::vector<std::uint64_t> ParseSeeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  try {
    if (text.find(',') == std::string::npos) {
      const std::uint64_t n = std::stoull(text);
      for (std::uint64_t s = 1; s <= n; ++s) seeds.push_back(s);
    } else {
      std::istringstream is(text);
      std::string item;
      while (std::getline(is, item, ',')) seeds.push_back(std::stoull(item));
    }
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad --seeds value '" + text + "'");
  }
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "no seeds given");
  return seeds;
}

dplimit::RunConfig BuildConfig(const Overrides& o, dplimit::Algorithm fallback) {
  dplimit::RunConfig config;
  bool has_algorithm = false;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read " + o.config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    config = dplimit::RunConfig::FromJson(buffer.str());
    has_algorithm = buffer.str().find("\"algorithm\"") != std::string::npos;
  }
  if (o.algorithm) {
    config.algorithm = dplimit::ParseAlgorithm(*o.algorithm);
  } else if (!has_algorithm) {
    config.algorithm = fallback;
    if (fallback == dplimit::Algorithm::kAlg3 && !o.stream) {
      config.stream.kind = dplimit::StreamKind::kIid;
    }
  }
  if (o.collection) config.collection = dplimit::CollectionSpec::Parse(*o.collection);
  if (o.epsilon) config.epsilon = *o.epsilon;
  if (o.horizon) config.horizon = *o.horizon;
  if (!o.seeds.empty()) config.seeds = ParseSeeds(o.seeds);
  if (o.out) config.out = *o.out;
  if (o.target) config.stream.target = *o.target;
  if (o.stream) config.stream.kind = dplimit::ParseStreamKind(*o.stream);
  if (o.source) config.stream.source = *o.source;
  if (!o.swap_times.empty()) config.stream.swap_times = o.swap_times;
  if (o.burn_in) config.burn_in = *o.burn_in;
  if (o.allow_duplicates) config.allow_duplicates = true;
  if (o.log_base) {
    if (*o.log_base == "e") {
      config.log_base = dplimit::LogBase::kNatural;
    } else if (*o.log_base == "2") {
      config.log_base = dplimit::LogBase::kTwo;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "--log-base must be e or 2");
    }
  }
  return config;
}

int RunCommand(const Overrides& o, dplimit::Algorithm fallback, bool generation) {
  const dplimit::RunConfig config = BuildConfig(o, fallback);
  if (dplimit::IsGenerator(config.algorithm) != generation) {
    throw Error(ErrorCode::kIncompatibleConfig,
                std::string(dplimit::AlgorithmName(config.algorithm)) +
                    (generation ? " is not a generator" : " is not an identifier"));
  }
  config.Validate();
  dplimit::RunMetrics metrics;
  try {
    metrics = dplimit::RunExperiment(config);
  } catch (const std::exception& e) {
    throw RunFailure(e.what());
  }
  std::cout << "algorithm=" << dplimit::AlgorithmName(config.algorithm)
            << " collection=" << config.collection.ToString()
            << " seeds=" << metrics.seeds.size()
            << " success_rate=" << metrics.success_rate();
  if (auto m = metrics.median_last_mistake_time()) {
    std::cout << " median_last_mistake=" << *m;
  }
  std::cout << '\n';
  dplimit::WriteSummaryCsv(std::cout, metrics);
  return kExitOk;
}

std::vector<double> ParseDoubles(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  try {
    while (std::getline(is, item, ',')) out.push_back(std::stod(item));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad number list '" + text + "'");
  }
  return out;
}

int RunSweep(const Overrides& o, const std::string& eps_grid,
             const std::string& n_grid) {
  const auto spec =
      dplimit::CollectionSpec::Parse(o.collection.value_or("sperner:4"));
  const std::vector<double> epsilons = ParseDoubles(eps_grid);
  std::vector<std::uint64_t> ns;
  for (double n : ParseDoubles(n_grid)) {
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
    ns.push_back(static_cast<std::uint64_t>(n));
  }
  std::uint64_t seeds = 200;
  if (!o.seeds.empty()) seeds = ParseSeeds(o.seeds).size();
  const auto cells = dplimit::SampleComplexitySweep(spec, epsilons, ns, seeds);
  std::ostringstream csv;
  dplimit::WriteSweepCsv(csv, cells);
  std::cout << csv.str();
  for (double eps : epsilons) {
    const auto n = dplimit::SmallestSuccessfulN(cells, eps, 2.0 / 3.0);
    std::cout << "# epsilon=" << eps << " smallest n with success >= 2/3: "
              << (n ? std::to_string(*n) : "none") << '\n';
  }
  if (o.out) {
    std::filesystem::create_directories(*o.out);
    std::ofstream f(std::filesystem::path(*o.out) / "sweep.csv");
    f << csv.str();
    if (!f) throw Error(ErrorCode::kIo, "cannot write sweep.csv");
  }
  return kExitOk;
}

int RunAudit(const Overrides& o, std::uint64_t pairs, std::uint64_t trials) {
  const dplimit::RunConfig config = BuildConfig(o, dplimit::Algorithm::kUniformFinite);
  dplimit::AuditOptions options;
  options.pairs = pairs;
  options.trials = trials;
  if (o.horizon) options.release_n = *o.horizon;
  const auto rows = dplimit::AuditPrivacy(config, options);
  std::ostringstream csv;
  dplimit::WriteAuditCsv(csv, rows);
  std::cout << csv.str();
  bool ok = true;
  for (const auto& r : rows) ok = ok && (r.control ? !r.pass : r.pass);
  std::cout << (ok ? "all releases pass" : "audit FAILED") << '\n';
  if (o.out) {
    std::filesystem::create_directories(*o.out);
    std::ofstream f(std::filesystem::path(*o.out) / "audit.csv");
    f << csv.str();
    if (!f) throw Error(ErrorCode::kIo, "cannot write audit.csv");
  }
  return ok ? kExitOk : kExitRun;
}

int RunClosure(const Overrides& o, std::size_t max_languages) {
  const auto spec =
      dplimit::CollectionSpec::Parse(o.collection.value_or("sperner:4"));
  const dplimit::Collection collection = spec.Build();
  if (collection.is_finite()) {
    std::cout << collection.name() << " closure dimension "
              << dplimit::ClosureDimension(collection) << '\n';
    return kExitOk;
  }
  std::vector<dplimit::Language> head;
  for (std::size_t i = 1; i <= max_languages; ++i) head.push_back(collection.language(i));
  const dplimit::Collection truncated(collection.name(), head, collection.traits());
  std::cout << collection.name() << " closure dimension over the first "
            << max_languages << " languages " << dplimit::ClosureDimension(truncated)
            << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private generation and identification in the limit"};
  app.require_subcommand(1);
  Overrides o;
  std::string eps_grid = "0.5,1,2";
  std::string n_grid = "2,4,6,8,10,12,16,20,24,32,40,48,64";
  std::uint64_t pairs = 100;
  std::uint64_t trials = 100'000;
  std::size_t max_languages = 12;

  CLI::App* generate = app.add_subcommand("generate", "run a private generator");
  AddRunFlags(generate, o);
  CLI::App* identify = app.add_subcommand("identify", "run a private identifier");
  AddRunFlags(identify, o);
  CLI::App* sweep = app.add_subcommand("sweep", "sample-complexity sweep");
  sweep->add_option("--collection", o.collection, "finite collection");
  sweep->add_option("--seeds", o.seeds, "seed count");
  sweep->add_option("--eps-grid", eps_grid, "comma-separated epsilons");
  sweep->add_option("--n-grid", n_grid, "comma-separated prefix lengths");
  sweep->add_option("--out", o.out, "output directory");
  CLI::App* audit = app.add_subcommand("audit", "privacy audit of one release");
  AddRunFlags(audit, o);
  audit->add_option("--pairs", pairs, "neighbouring pairs per release");
  audit->add_option("--trials", trials, "Monte-Carlo trials (sampled audit)");
  CLI::App* closure = app.add_subcommand("closure", "closure dimension");
  closure->add_option("--collection", o.collection, "collection");
  closure->add_option("--max-languages", max_languages,
                      "prefix length for countable collections");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*generate) return RunCommand(o, dplimit::Algorithm::kAlg1, true);
    if (*identify) return RunCommand(o, dplimit::Algorithm::kAlg2, false);
    if (*sweep) return RunSweep(o, eps_grid, n_grid);
    if (*audit) return RunAudit(o, pairs, trials);
    if (*closure) return RunClosure(o, max_languages);
  } catch (const RunFailure& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kExitRun;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool config_error = e.code() == ErrorCode::kInvalidArgument ||
                              e.code() == ErrorCode::kIncompatibleConfig ||
                              e.code() == ErrorCode::kNoTellTale;
    return config_error ? kExitConfig : kExitRun;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRun;
  }
  return kExitConfig;
}
