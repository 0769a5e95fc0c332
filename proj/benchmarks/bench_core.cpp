// Microbenchmarks for the kernels that dominate solver time: the spectral
// Laplacian pair, both Dirichlet-energy paths, full energy evaluation, the
// residual, and the Sobolev gradient. Run with --benchmark_filter=... to
// focus on one kernel.

#include <benchmark/benchmark.h>

#include "mf/field.hpp"
#include "mf/functional.hpp"
#include "mf/grid.hpp"
#include "mf/rng.hpp"
#include "mf/spectral.hpp"

namespace {

mf::MeanZeroField make_field(int n, mf::Smoothness tag) {
  mf::TorusGrid grid(n);
  mf::Rng rng(9001);
  const mf::MeanZeroField u = mf::random_direction(grid, rng, 1.5);
  return mf::MeanZeroField(mf::Field(grid, u.values(), tag));
}

void bm_laplacian_roundtrip(benchmark::State& state) {
  const mf::MeanZeroField u =
      make_field(static_cast<int>(state.range(0)), mf::Smoothness::smooth);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mf::inv_minus_laplacian(mf::minus_laplacian(u)));
  }
}

void bm_h1_spectral(benchmark::State& state) {
  const mf::MeanZeroField u =
      make_field(static_cast<int>(state.range(0)), mf::Smoothness::smooth);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mf::h1_norm_sq(u));
  }
}

void bm_h1_differences(benchmark::State& state) {
  const mf::MeanZeroField u =
      make_field(static_cast<int>(state.range(0)), mf::Smoothness::kinked);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mf::h1_norm_sq(u));
  }
}

void bm_energy(benchmark::State& state) {
  const mf::MeanZeroField u =
      make_field(static_cast<int>(state.range(0)), mf::Smoothness::smooth);
  const mf::Params p(30.0, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mf::eval_I(u, p).total);
  }
}

void bm_residual(benchmark::State& state) {
  const mf::MeanZeroField u =
      make_field(static_cast<int>(state.range(0)), mf::Smoothness::smooth);
  const mf::Params p(30.0, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mf::residual(u, p));
  }
}

void bm_sobolev_gradient(benchmark::State& state) {
  const mf::MeanZeroField u =
      make_field(static_cast<int>(state.range(0)), mf::Smoothness::smooth);
  const mf::Params p(30.0, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mf::sobolev_gradient(u, p));
  }
}

}  // namespace

BENCHMARK(bm_laplacian_roundtrip)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_h1_spectral)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_h1_differences)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_energy)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_residual)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_sobolev_gradient)->Arg(128)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
