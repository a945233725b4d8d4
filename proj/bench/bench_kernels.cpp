// Serial reference vs OpenMP kernels on synthetic batches. Each pair of
// benchmarks runs the same inputs; Arg is the batch scale.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "srauth/analyzer.hpp"
#include "srauth/authsim.hpp"
#include "srauth/ingest.hpp"
#include "srauth/phonetics.hpp"
#include "srauth/similarity.hpp"

namespace {

namespace fs = std::filesystem;
using namespace srauth;

const fs::path kData = SRAUTH_DATA_DIR;

struct SimInputs {
  std::vector<AuthMethod> methods;
  std::vector<PlatformSetting> settings;
  std::vector<ScreenReaderProfile> profiles;
  std::vector<authsim::AttackKind> attacks;
};

// The shipped matrix with the catalog repeated `copies` times.
SimInputs MakeSim(int copies) {
  SimInputs in;
  const auto catalog = ingest::LoadCatalog(kData / "catalog.json");
  for (int i = 0; i < copies; ++i) in.methods.insert(in.methods.end(), catalog.begin(), catalog.end());
  in.settings = ingest::LoadSettings(kData / "settings.json");
  in.profiles = ingest::LoadProfileDir(kData / "profiles");
  const auto all = AllValues<authsim::AttackKind>();
  in.attacks.assign(all.begin(), all.end());
  return in;
}

template <bool kParallel>
void BM_RunMatrix(benchmark::State& state) {
  const auto in = MakeSim(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto out = kParallel ? authsim::RunMatrix(in.methods, in.settings, in.profiles, in.attacks)
                         : authsim::RunMatrixSerial(in.methods, in.settings, in.profiles, in.attacks);
    benchmark::DoNotOptimize(out);
  }
}

struct AnalyzeInputs {
  std::vector<ScreenReaderProfile> profiles;
  std::map<std::string, WorkflowSpec> workflows;
  std::vector<SessionRecord> sessions;
  std::vector<analyzer::AnalysisJob> jobs;
};

std::unique_ptr<AnalyzeInputs> MakeAnalyze(int copies) {
  auto in = std::make_unique<AnalyzeInputs>();
  in->profiles = ingest::LoadProfileDir(kData / "profiles");
  for (const auto& p : ingest::ListJsonFiles(kData / "fixtures" / "workflows")) {
    auto w = ingest::LoadWorkflow(p);
    in->workflows.emplace(w.id, w);
  }
  std::vector<SessionRecord> base;
  for (const auto& p : ingest::ListJsonFiles(kData / "fixtures" / "sessions")) {
    base.push_back(ingest::LoadSession(p).value);
  }
  for (int i = 0; i < copies; ++i) in->sessions.insert(in->sessions.end(), base.begin(), base.end());
  for (const auto& s : in->sessions) {
    in->jobs.push_back({&s, &in->workflows.at(s.workflow),
                        FindProfile(in->profiles, *analyzer::GoverningReader(s.setting))});
  }
  return in;
}

template <bool kParallel>
void BM_AnalyzeBatch(benchmark::State& state) {
  const auto in = MakeAnalyze(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto out = kParallel ? analyzer::AnalyzeBatch(in->jobs) : analyzer::AnalyzeBatchSerial(in->jobs);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(in->jobs.size()));
}

std::vector<similarity::TextPair> MakePairs(int n) {
  std::mt19937 rng(1);
  std::vector<similarity::TextPair> pairs;
  for (int i = 0; i < n; ++i) {
    std::string a, b;
    for (int k = 0; k < 200; ++k) {
      const std::string w = "w" + std::to_string(rng() % 300) + " ";
      a += w;
      if (rng() % 4) b += w;
    }
    pairs.emplace_back(a, b);
  }
  return pairs;
}

template <bool kParallel>
void BM_Comprehensibility(benchmark::State& state) {
  const auto pairs = MakePairs(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto out = kParallel ? similarity::ComprehensibilityBatch(pairs)
                         : similarity::ComprehensibilityBatchSerial(pairs);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<std::string> MakeTrusted(int n) {
  std::mt19937 rng(2);
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    std::string s(6 + rng() % 10, 'a');
    for (auto& c : s) c = static_cast<char>('a' + rng() % 26);
    out.push_back(s + ".com");
  }
  return out;
}

template <bool kParallel>
void BM_FlagLookalikes(benchmark::State& state) {
  const auto trusted = MakeTrusted(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto out = kParallel ? phonetics::FlagLookalikes("bankoffamerica.com", trusted, 0.5)
                         : phonetics::FlagLookalikesSerial("bankoffamerica.com", trusted, 0.5);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_RunMatrix<false>)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunMatrix<true>)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnalyzeBatch<false>)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnalyzeBatch<true>)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Comprehensibility<false>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Comprehensibility<true>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlagLookalikes<false>)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlagLookalikes<true>)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
