#include "kme/concurrence.hpp"

#include "kme/errors.hpp"

namespace kme {

double kme_fixed_partition(const StateVector& psi, const KPartition& partition) {
  const int n = psi.shape().parties();
  if (partition.parties() != n)
    throw InputError("partition covers " + std::to_string(partition.parties()) + " parties, state has " + std::to_string(n));
  if (partition.size() < 2) throw InputError("k-ME concurrence needs k >= 2 blocks");
  std::vector<double> entropies;
  std::vector<std::uint32_t> masks;
  // Dense index by block position so partition_value sees the same expression
  // as the scan kernels.
  for (const auto& block : partition.blocks()) {
    entropies.push_back(linear_entropy(psi, block));
    masks.push_back(static_cast<std::uint32_t>(masks.size()));
  }
  return kernels::partition_value(masks, entropies);
}

ConcurrenceResult kme_concurrence_pure(const StateVector& psi, int k, const ConcurrenceOptions& options) {
  const int n = psi.shape().parties();
  if (k < 2 || k > n)
    throw InputError("k-ME concurrence needs 2 <= k <= n, got k=" + std::to_string(k) + " n=" + std::to_string(n));
  if (n > kMaxEnumerationParties)
    throw InputError("exact minimisation enumerates all k-partitions and is limited to n <= " +
                     std::to_string(kMaxEnumerationParties) + "; use kme_fixed_partition for larger systems");

  const bool par = options.execution == Execution::parallel;
  const PartitionTable table = partition_table(n, k);
  const std::vector<double> entropies = par ? kernels::subset_entropies_omp(psi) : kernels::subset_entropies_serial(psi);

  std::vector<double> per;
  std::vector<double>* per_ptr = options.keep_per_partition ? &per : nullptr;
  const auto best = par ? kernels::scan_partitions_omp(table, entropies, per_ptr)
                        : kernels::scan_partitions_serial(table, entropies, per_ptr);

  ConcurrenceResult result{best.value, table.partition(best.rank), best.rank, std::nullopt};
  if (options.keep_per_partition) result.per_partition_values = std::move(per);
  return result;
}

bool is_k_separable_pure(const StateVector& psi, int k, double tol) {
  return kme_concurrence_pure(psi, k).value < tol;
}

}  // namespace kme
