#include <benchmark/benchmark.h>

#include <random>

#include "msmooth/density.hpp"
#include "msmooth/window.hpp"

using namespace msmooth;

namespace {

Field noise(int n) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> pix(0.0, 255.0);
  Field f(n, n);
  for (auto& v : f.values()) v = pix(rng);
  return f;
}

}  // namespace

static void BM_ModeSmootherStep(benchmark::State& state) {
  const Field f = noise(96);
  SmootherConfig cfg;
  cfg.window = {WindowShape::Disc, static_cast<double>(state.range(0))};
  cfg.kind = SmootherKind::Mode;
  for (auto _ : state) {
    Field g = msmooth_step(f, cfg);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}
BENCHMARK(BM_ModeSmootherStep)->Arg(5)->Arg(13);

static void BM_PmeanDensity(benchmark::State& state) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> pix(0.0, 255.0);
  std::vector<double> samples(static_cast<size_t>(state.range(0)));
  for (auto& s : samples) s = pix(rng);
  const Density1D d = estimate_density(samples, default_bin_count(samples.size()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pmean(d, 1.0));
  }
}
BENCHMARK(BM_PmeanDensity)->Arg(25)->Arg(529);

static void BM_EstimateDensity(benchmark::State& state) {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> pix(0.0, 255.0);
  std::vector<double> samples(static_cast<size_t>(state.range(0)));
  for (auto& s : samples) s = pix(rng);
  for (auto _ : state) {
    Density1D d = estimate_density(samples, default_bin_count(samples.size()));
    benchmark::DoNotOptimize(d.masses.data());
  }
}
BENCHMARK(BM_EstimateDensity)->Arg(529);
