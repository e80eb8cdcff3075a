#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "cdlab/diagnostics.hpp"
#include "cdlab/solver.hpp"

namespace {

using namespace cdlab;

struct Fixture {
  explicit Fixture(std::size_t n)
      : grid(n),
        pair(build_pair(PotentialSpec::cosine({{0.5, 1, 0.0}}), PotentialSpec::zero(), grid)),
        state(make_initial(InitialSpec{InitialFamily::cosine_mix, 0.3, 0.2, 1, 2}, grid)) {}
  Grid grid;
  PotentialPair pair;
  SpeciesState state;
  SchemeConfig cfg;
};

void BM_Step(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    auto r = step(f.state, f.pair, f.cfg);
    benchmark::DoNotOptimize(r.state.rho1[0]);
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Step)->RangeMultiplier(2)->Range(64, 1024);

void BM_Record(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  RecorderState running;
  for (auto _ : st) {
    const MixedState m = to_mixed(f.state, f.pair);
    auto rec = record(f.state, m, f.pair, f.cfg, running);
    benchmark::DoNotOptimize(rec.first_order_energy);
  }
}
BENCHMARK(BM_Record)->RangeMultiplier(2)->Range(64, 1024);

void BM_Run(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  f.cfg.t_end = 0.01;
  for (auto _ : st) {
    auto t = run(f.state, f.pair, f.cfg, nullptr, 10, {make_recorder(f.pair, f.cfg)});
    benchmark::DoNotOptimize(t.steps);
  }
}
BENCHMARK(BM_Run)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
