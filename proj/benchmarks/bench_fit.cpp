#include <benchmark/benchmark.h>

#include "blochdf/bloch.hpp"
#include "blochdf/dfcore.hpp"
#include "blochdf/metrics.hpp"
#include "blochdf/rng.hpp"

namespace {

using namespace blochdf;

// Orbitals of the 2D Gaussian well on a 32^2 grid, 20 bands on a 4x4 mesh.
const BlochOrbitalSet& orbitals() {
  static const BlochOrbitalSet set = [] {
    LatticeConfig lat{2, 32, 4};
    const RealGrid grid = build_grid(lat);
    const SampledPotential v = sample_potential(paper_potential(ExampleId::gauss_2d), grid);
    return solve_all(lat, 20, v, SolverOptions{});
  }();
  return set;
}

void BM_DensityFitBands(benchmark::State& state) {
  const BlochOrbitalSet sub = slice_orbitals(orbitals(), static_cast<int>(state.range(0)), 4);
  FittingConfig cfg;
  Index n_col = 0;
  for (auto _ : state) {
    const FittingResult r = density_fit(sub, cfg);
    n_col = r.n_col;
    benchmark::DoNotOptimize(r.P.data());
  }
  state.counters["N_col"] = static_cast<double>(n_col);
}
BENCHMARK(BM_DensityFitBands)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_DensityFitKMesh(benchmark::State& state) {
  const BlochOrbitalSet sub = slice_orbitals(orbitals(), 10, static_cast<int>(state.range(0)));
  FittingConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(density_fit(sub, cfg).n_col);
}
BENCHMARK(BM_DensityFitKMesh)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_FourierCompress(benchmark::State& state) {
  const BlochOrbitalSet sub = slice_orbitals(orbitals(), 10, static_cast<int>(state.range(0)));
  FittingConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(random_fourier_compress(sub.U, 10, cfg).M.data());
}
BENCHMARK(BM_FourierCompress)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ApplyHamiltonian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RealGrid grid(2, n);
  const SampledPotential v = sample_potential(paper_potential(ExampleId::gauss_2d), grid);
  const BlochHamiltonian h(grid, v, KPoint{RVector::Zero(2)});
  CounterRng rng(1, RngStream::eigen_init);
  CMatrix block(grid.size(), 16);
  for (Index i = 0; i < block.size(); ++i) block.data()[i] = Complex(rng.uniform(), rng.uniform());
  CMatrix out;
  for (auto _ : state) {
    h.apply(block, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ApplyHamiltonian)->Arg(24)->Arg(48)->Unit(benchmark::kMicrosecond);

void BM_CoulombNorm(benchmark::State& state) {
  const RealGrid grid(2, 32);
  const CoulombMetric metric(grid);
  const CVector f = orbitals().U.row(0).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(metric.norm(f));
}
BENCHMARK(BM_CoulombNorm)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
