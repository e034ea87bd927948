#include <benchmark/benchmark.h>

#include <random>

#include "tsnsim/case_study.hpp"
#include "tsnsim/event_queue.hpp"
#include "tsnsim/gcl.hpp"
#include "tsnsim/simulation.hpp"

namespace {

void event_queue_churn(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    tsnsim::EventQueue q;
    for (std::int64_t i = 0; i < n; ++i) {
      q.schedule(tsnsim::SimTime::ns(0), tsnsim::SimTime::ns(static_cast<std::int64_t>(rng() % 1'000'000)),
                 [] {});
    }
    while (!q.empty()) {
      benchmark::DoNotOptimize(q.pop());
    }
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(event_queue_churn)->Range(1 << 10, 1 << 16);

void gate_lookup(benchmark::State& state) {
  tsnsim::GateControlList gcl(
      tsnsim::SimTime::ms(1), tsnsim::SimTime::ns(0),
      {tsnsim::GclEntry{tsnsim::SimTime::us(123), 0x00}, tsnsim::GclEntry{tsnsim::SimTime::us(372), 0x80},
       tsnsim::GclEntry{tsnsim::SimTime::us(505), 0x7f}});
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gcl.is_open(7, tsnsim::SimTime::ns(static_cast<std::int64_t>(rng() % 10'000'000))));
  }
}
BENCHMARK(gate_lookup);

void case_study_run(benchmark::State& state) {
  tsnsim::Scenario s = tsnsim::build_case_study(state.range(0) == 0
                                                    ? tsnsim::RunMode::Transactional
                                                    : tsnsim::RunMode::NonTransactional);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tsnsim::run_scenario(s));
  }
}
BENCHMARK(case_study_run)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
