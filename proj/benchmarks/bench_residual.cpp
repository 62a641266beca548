#include "gfsem/dec_time.hpp"

#include <benchmark/benchmark.h>

using namespace gfsem;

namespace {

struct Setup {
  ProblemSpec problem = coriolis_vortex();
  GridPtr grid;
  State q;
  SourceFields s;

  Setup(int K, int N) : grid(make_grid(K, N, N, problem.domain)) {
    q = sample_state(grid, problem.exact, 0.0);
    s = SourceEvaluator(problem, grid)(q, 0.0);
  }
};

void spatial(benchmark::State& st, Formulation f, Stabilization stab) {
  const Setup su(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const SchemeConfig cfg = SchemeConfig::make(f, stab, *su.grid);
  for (auto _ : st) benchmark::DoNotOptimize(spatial_residual(su.q, su.s, cfg));
  st.counters["nodes"] = su.grid->nx() * su.grid->ny();
}

void BM_StandardSU(benchmark::State& st) { spatial(st, Formulation::standard, Stabilization::su); }
void BM_GlobalFluxSU(benchmark::State& st) {
  spatial(st, Formulation::global_flux, Stabilization::su);
}
void BM_GlobalFluxOSS(benchmark::State& st) {
  spatial(st, Formulation::global_flux, Stabilization::oss);
}

void BM_DeCStep(benchmark::State& st) {
  const Setup su(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  AcousticSystem sys(su.problem, su.grid,
                     SchemeConfig::make(Formulation::global_flux, Stabilization::su, *su.grid));
  const DeCConfig dec = DeCConfig::for_degree(su.grid->degree());
  const double dt = time_step(*su.grid, dec.cfl);
  for (auto _ : st) benchmark::DoNotOptimize(dec_step(sys, su.q, 0.0, dt, dec));
}

void BM_GFVars(benchmark::State& st) {
  const Setup su(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(compute_gf_vars(su.q, su.s));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int K : {1, 2, 3})
    for (int N : {10, 20, 40}) b->Args({K, N});
}

}  // namespace

BENCHMARK(BM_StandardSU)->Apply(sizes);
BENCHMARK(BM_GlobalFluxSU)->Apply(sizes);
BENCHMARK(BM_GlobalFluxOSS)->Apply(sizes);
BENCHMARK(BM_GFVars)->Apply(sizes);
BENCHMARK(BM_DeCStep)->Args({2, 20})->Args({3, 20});
BENCHMARK_MAIN();
