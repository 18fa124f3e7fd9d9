#pragma once

// Exact k-ME concurrence of pure states:
//
//   C_k(psi) = min over k-partitions A_1|...|A_k of sqrt((2/k) sum_t (1 - Tr rho_{A_t}^2)).
//
// Mixed states are not handled here; their convex roof is not computable and
// they are served by the lower bounds in bounds.hpp.

#include <optional>
#include <vector>

#include "kme/kernels.hpp"
#include "kme/partitions.hpp"
#include "kme/qnum.hpp"

namespace kme {

struct ConcurrenceResult {
  double value = 0.0;
  KPartition argmin_partition;
  std::size_t argmin_rank = 0;  ///< rank in enumerate_k_partitions order
  /// Value for every partition, indexed by canonical rank (opt-in).
  std::optional<std::vector<double>> per_partition_values;
};

struct ConcurrenceOptions {
  bool keep_per_partition = false;
  Execution execution = Execution::parallel;
};

double kme_fixed_partition(const StateVector& psi, const KPartition& partition);

/// Requires 2 <= k <= n <= kMaxEnumerationParties.
ConcurrenceResult kme_concurrence_pure(const StateVector& psi, int k, const ConcurrenceOptions& options = {});

/// True iff kme_concurrence_pure(psi, k).value < tol.
bool is_k_separable_pure(const StateVector& psi, int k, double tol = 1e-8);

}  // namespace kme
