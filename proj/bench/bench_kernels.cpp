// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "kme/kernels.hpp"
#include "kme/partitions.hpp"
#include "kme/sweep.hpp"

namespace {

using namespace kme;

void BM_SubsetEntropies(benchmark::State& state, bool parallel) {
  const StateVector psi = random_pure(SystemShape::qubits(static_cast<int>(state.range(0))), 7);
  for (auto _ : state) {
    auto p = parallel ? kernels::subset_entropies_omp(psi) : kernels::subset_entropies_serial(psi);
    benchmark::DoNotOptimize(p.data());
  }
}

void BM_ScanPartitions(benchmark::State& state, bool parallel) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const StateVector psi = random_pure(SystemShape::qubits(n), 11);
  const auto entropies = kernels::subset_entropies_serial(psi);
  const PartitionTable table = partition_table(n, k);
  for (auto _ : state) {
    auto r = parallel ? kernels::scan_partitions_omp(table, entropies) : kernels::scan_partitions_serial(table, entropies);
    benchmark::DoNotOptimize(r);
  }
  state.counters["partitions"] = static_cast<double>(table.count());
}

void BM_SweepPoints(benchmark::State& state, bool parallel) {
  SweepSpec spec;
  spec.n = static_cast<int>(state.range(0));
  spec.probes = ProbeSet::both;
  spec.grid = 101;
  const SweepModel model(spec);
  const auto points = grid_points(spec);
  std::vector<SweepRow> rows(points.size());
  for (auto _ : state) {
    if (parallel)
      kernels::sweep_points_omp(model, points, rows);
    else
      kernels::sweep_points_serial(model, points, rows);
    benchmark::DoNotOptimize(rows.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(points.size()));
}

}  // namespace

BENCHMARK_CAPTURE(BM_SubsetEntropies, serial, false)->DenseRange(8, 14, 2);
BENCHMARK_CAPTURE(BM_SubsetEntropies, omp, true)->DenseRange(8, 14, 2);
BENCHMARK_CAPTURE(BM_ScanPartitions, serial, false)->Args({10, 3})->Args({12, 4});
BENCHMARK_CAPTURE(BM_ScanPartitions, omp, true)->Args({10, 3})->Args({12, 4});
BENCHMARK_CAPTURE(BM_SweepPoints, serial, false)->Arg(5)->Arg(10);
BENCHMARK_CAPTURE(BM_SweepPoints, omp, true)->Arg(5)->Arg(10);

BENCHMARK_MAIN();
