#include <benchmark/benchmark.h>

#include "beltrami/conformal_galerkin.hpp"
#include "beltrami/functionals.hpp"
#include "beltrami/torus.hpp"

using namespace beltrami;

static void BM_CurlExplicitBasis(benchmark::State& state) {
  const AtlasEntry e = explicit_basis(static_cast<int>(state.range(0)));
  for (auto _ : state)
    for (const auto& f : e.fields) benchmark::DoNotOptimize(curl(f));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(e.dimension()));
}
BENCHMARK(BM_CurlExplicitBasis)->Arg(3)->Arg(5);

static void BM_ExactInner(benchmark::State& state) {
  const FrameField& a = explicit_field("w7");
  const FrameField& b = explicit_field("w12");
  for (auto _ : state) benchmark::DoNotOptimize(inner(a, b));
}
BENCHMARK(BM_ExactInner);

static void BM_EnergyQuadrature(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const HopfGrid grid(QuadratureSpec{r, 2 * r});
  HopfPerturbation W;
  W.a[4] = 0.1;
  W.b[9] = -0.05;
  const RealFrameField F = to_real(explicit_field("B1")) + W.assemble();
  for (auto _ : state) benchmark::DoNotOptimize(l32_energy(F, grid));
  state.counters["nodes"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_EnergyQuadrature)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_DerivativesAtHopf(benchmark::State& state) {
  HopfPerturbation W;
  for (int i = 0; i < 8; ++i) W.a[static_cast<std::size_t>(i)] = 0.1 * (i + 1);
  for (auto _ : state) benchmark::DoNotOptimize(hopf_F_derivatives(W));
}
BENCHMARK(BM_DerivativesAtHopf)->Unit(benchmark::kMillisecond);

static void BM_GalerkinMu1(benchmark::State& state) {
  const ConformalFactor cf{parse_poly("x1^2 - x2*x3 + x4"), 0.02};
  const int dmax = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mu1_normalized(Manifold::s3, cf, dmax));
}
BENCHMARK(BM_GalerkinMu1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_TorusPencil(benchmark::State& state) {
  const TrigPoly q = abc_speed_direction();
  for (auto _ : state) benchmark::DoNotOptimize(torus_pencil(q, 0.01, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TorusPencil)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
