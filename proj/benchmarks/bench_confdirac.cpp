#include <benchmark/benchmark.h>

#include "confdirac/functional.hpp"
#include "confdirac/green.hpp"
#include "confdirac/invariant.hpp"

using namespace confdirac;

static void BM_SpectrumExact(benchmark::State& state) {
  const CliffordRep rep(static_cast<int>(state.range(0)));
  const SpinStructure delta = SpinStructure::from_mask(rep.dimension(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_exact(rep, delta, static_cast<int>(state.range(1))));
}
BENCHMARK(BM_SpectrumExact)->Args({2, 16})->Args({3, 8})->Unit(benchmark::kMillisecond);

static void BM_SpectralDiracApply(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const CliffordRep rep(2);
  const Grid grid(2, m);
  const SpectralDirac D(rep, SpinStructure({0.5, 0.0}), grid);
  const Eigen::VectorXcd v = Eigen::VectorXcd::Random(grid.size() * 2);
  for (auto _ : state) benchmark::DoNotOptimize(D.apply(v));
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_SpectralDiracApply)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

static void BM_ExtremeEigenvalues(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const CliffordRep rep(2);
  const ConformalSearchSpace space(2);
  Eigen::VectorXd theta(space.size());
  theta << 0.0, 0.3, -0.2, 0.1, 0.25;
  const auto u = space.factor(theta, Grid(2, m));
  const ConformalDirac D(rep, SpinStructure({0.5, 0.0}), u);
  for (auto _ : state) benchmark::DoNotOptimize(extreme_eigenvalues(D));
}
BENCHMARK(BM_ExtremeEigenvalues)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_GreenKernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CliffordRep rep(n);
  const GreenFunction G(rep, SpinStructure::from_mask(n, 1), Eigen::VectorXd::Constant(n, 0.5));
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(n, 0.17);
  for (auto _ : state) benchmark::DoNotOptimize(G.kernel_vector(y));
}
BENCHMARK(BM_GreenKernel)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

static void BM_MassEndomorphism(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CliffordRep rep(n);
  const SpinStructure delta = SpinStructure::from_mask(n, (1u << n) - 1);
  for (auto _ : state) benchmark::DoNotOptimize(mass_endomorphism(rep, delta, Eigen::VectorXd::Constant(n, 0.5)));
}
BENCHMARK(BM_MassEndomorphism)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_SimpleFamilyJ(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  const CliffordRep rep(2);
  TestSpinorParams p;
  p.epsilon = eps;
  p.psi0 = Spinor::Unit(2, 0);
  const int m = static_cast<int>(4.0 / eps);
  for (auto _ : state)
    benchmark::DoNotOptimize(simple_family_J(rep, p, CutoffShape::CosineSquared, m, Eigen::Vector2d(0.5, 0.5),
                                             SpinStructure({0.5, 0.0})));
}
BENCHMARK(BM_SimpleFamilyJ)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_ThreeZoneSample(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const CliffordRep rep(2);
  TestSpinorParams p;
  p.epsilon = 0.01;
  p.psi0 = Spinor::Unit(2, 0);
  GreenOptions go;
  go.split = 0.002;
  const GreenFunction G(rep, SpinStructure({0.5, 0.0}), Eigen::Vector2d(0.5, 0.5), go);
  const Grid grid(2, m);
  for (auto _ : state) benchmark::DoNotOptimize(test_spinor_three_zone(rep, p, CutoffShape::CosineSquared, G, grid));
}
BENCHMARK(BM_ThreeZoneSample)->Arg(128)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
