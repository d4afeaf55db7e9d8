#include <benchmark/benchmark.h>

#include "zaremba/eig.hpp"
#include "zaremba/fem.hpp"
#include "zaremba/mesh.hpp"

using namespace zaremba;

namespace {

const Angle kPi = Angle::pi_times(1, 1);

BoundaryPartition partition() { return make_gamma({kPi, Angle::pi_times(1, 8)}); }

void BM_Triangulate(benchmark::State& state) {
  const double h = 0.1 / static_cast<double>(state.range(0));
  const auto p = partition();
  std::size_t vertices = 0;
  for (auto _ : state) {
    const auto m = triangulate(p, h, 6);
    vertices = m.vertices.size();
    benchmark::DoNotOptimize(m.triangles.data());
  }
  state.counters["vertices"] = static_cast<double>(vertices);
}
BENCHMARK(BM_Triangulate)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const auto m = triangulate(partition(), 0.1 / static_cast<double>(state.range(0)), 6);
  for (auto _ : state) {
    const auto pair = assemble(m);
    benchmark::DoNotOptimize(pair.stiffness.nonZeros());
  }
  state.counters["vertices"] = static_cast<double>(m.vertices.size());
}
BENCHMARK(BM_Assemble)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SolveSmallest(benchmark::State& state) {
  const auto pair = assemble(triangulate(partition(), 0.1 / static_cast<double>(state.range(0)), 6));
  for (auto _ : state) {
    const auto r = solve_smallest(pair, 3, 1e-10);
    benchmark::DoNotOptimize(r.eigenvalues.data());
  }
  state.counters["dofs"] = static_cast<double>(pair.dofs());
}
BENCHMARK(BM_SolveSmallest)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DenseReference(benchmark::State& state) {
  const auto pair = assemble(triangulate(partition(), 0.15, 0));
  for (auto _ : state) {
    const auto r = solve_dense_reference(pair, 3);
    benchmark::DoNotOptimize(r.eigenvalues.data());
  }
  state.counters["dofs"] = static_cast<double>(pair.dofs());
}
BENCHMARK(BM_DenseReference)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
