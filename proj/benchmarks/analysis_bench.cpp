#include <benchmark/benchmark.h>

#include <random>

#include "codewe/audit/audit.hpp"
#include "scenario.hpp"

using namespace codewe;
using namespace codewe::testing;

namespace {

std::unique_ptr<Scenario> closed(std::uint64_t n, std::size_t items) {
  DraftShape shape;
  shape.item_count = items;
  shape.max_responses = n;
  shape.token_count = n;
  auto s = std::make_unique<Scenario>(shape, "bench-analysis");
  s->open();
  std::mt19937_64 rng(4);
  for (std::uint64_t i = 0; i < n; ++i) s->submit_random(rng);
  s->close();
  return s;
}

}  // namespace

static void BM_IngestAndScore(benchmark::State& state) {
  auto s = closed(static_cast<std::uint64_t>(state.range(0)), 20);
  for (auto _ : state) {
    auto in = analysis::ingest(s->ledger, s->store, s->id);
    benchmark::DoNotOptimize(analysis::assemble_report_body(in, analysis::score(in.store, in.params)));
  }
}
BENCHMARK(BM_IngestAndScore)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Audit(benchmark::State& state) {
  auto s = closed(static_cast<std::uint64_t>(state.range(0)), 10);
  auto built = s->analyze();
  const auto recs = s->records();
  for (auto _ : state) benchmark::DoNotOptimize(audit::audit_completeness(recs, s->store, s->id, built.report));
}
BENCHMARK(BM_Audit)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_ScoreOnly(benchmark::State& state) {
  DraftShape shape;
  shape.item_count = 20;
  auto params = make_draft(shape);
  std::mt19937_64 rng(5);
  std::vector<std::map<std::string, std::int64_t>> answers;
  for (std::int64_t i = 0; i < state.range(0); ++i) answers.push_back(random_answers(params, rng));
  for (auto _ : state) benchmark::DoNotOptimize(analysis::score(answers, params));
}
BENCHMARK(BM_ScoreOnly)->Arg(100)->Arg(10000);
