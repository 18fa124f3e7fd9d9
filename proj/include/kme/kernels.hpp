#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version; both produce bitwise-identical results because every
// output element is computed by the same expression and reductions are
// resolved by canonical rank, never by completion order.

#include <cstddef>
#include <span>
#include <vector>

#include "kme/partitions.hpp"
#include "kme/qnum.hpp"

namespace kme {

enum class Execution { serial, parallel };

namespace kernels {

/// entropies[mask] = linear_entropy(psi, A) for A = mask, over all
/// 0 < mask < 2^n. Entry 0 is unused; entry 2^n - 1 is 0.
std::vector<double> subset_entropies_serial(const StateVector& psi);
std::vector<double> subset_entropies_omp(const StateVector& psi);

/// sqrt((2/k) * sum_t entropy(A_t)) for one partition's block masks.
double partition_value(std::span<const std::uint32_t> blocks, std::span<const double> entropies);

struct ScanResult {
  double value;
  std::size_t rank;  ///< first minimiser in canonical order
};

/// Minimum of partition_value over the table. When `per_partition` is
/// non-null it receives one value per rank.
ScanResult scan_partitions_serial(const PartitionTable& table, std::span<const double> entropies,
                                  std::vector<double>* per_partition = nullptr);
ScanResult scan_partitions_omp(const PartitionTable& table, std::span<const double> entropies,
                               std::vector<double>* per_partition = nullptr);

}  // namespace kernels
}  // namespace kme
