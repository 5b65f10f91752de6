#include <benchmark/benchmark.h>

#include <random>

#include "msmooth/field.hpp"
#include "msmooth/pde2d.hpp"

using namespace msmooth;

namespace {

Field noise(int n) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> pix(0.0, 255.0);
  Field f(n, n);
  for (auto& v : f.values()) v = pix(rng);
  return f;
}

}  // namespace

static void BM_LaplacianBlend(benchmark::State& state) {
  const Field f = noise(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Field g = laplacian_blend(f, kDiagonalWeight);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}
BENCHMARK(BM_LaplacianBlend)->Arg(128)->Arg(512);

static void BM_MinmodLaplacian(benchmark::State& state) {
  const Field f = noise(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Field g = backward_laplacian_minmod(f, kDiagonalWeight);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}
BENCHMARK(BM_MinmodLaplacian)->Arg(128)->Arg(512);

static void BM_UpwindGradmag(benchmark::State& state) {
  const Field f = noise(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Field g = upwind_gradmag(f, kDiagonalWeight, UpwindSense::Dilation);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}
BENCHMARK(BM_UpwindGradmag)->Arg(128)->Arg(512);

static void BM_SplittingCycle(benchmark::State& state) {
  const Field f = noise(static_cast<int>(state.range(0)));
  const double p = -1.0;
  const double tau = 0.9 * stability_limit(p, kDiagonalWeight, 1.0).effective();
  for (auto _ : state) {
    Field u = diffusion_half_step(f, p, tau, StencilPart::Axial, kDiagonalWeight);
    u = diffusion_half_step(u, p, tau, StencilPart::Diagonal, kDiagonalWeight);
    u = mcm_half_step(u, p, tau, StencilPart::Axial, kDiagonalWeight, 1e-10, 2.0);
    u = mcm_half_step(u, p, tau, StencilPart::Diagonal, kDiagonalWeight, 1e-10, 2.0);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}
BENCHMARK(BM_SplittingCycle)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
