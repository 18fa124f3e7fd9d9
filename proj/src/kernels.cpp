#include "kme/kernels.hpp"

#include <cmath>
#include <limits>

#include <omp.h>

#include "kme/errors.hpp"

namespace kme::kernels {

namespace {

std::size_t mask_count(const StateVector& psi) {
  const int n = psi.shape().parties();
  if (n > kMaxEnumerationParties)
    throw InputError("subset entropy table is limited to n <= " + std::to_string(kMaxEnumerationParties));
  return std::size_t{1} << n;
}

// A pure state's marginals on A and its complement share their spectrum, so
// only masks that exclude the last party are computed directly.
double entropy_for_mask(const StateVector& psi, std::uint32_t mask) {
  return linear_entropy(psi, SubsystemSet::from_mask(mask));
}

bool better(const ScanResult& a, const ScanResult& b) {
  return a.value < b.value || (a.value == b.value && a.rank < b.rank);
}

}  // namespace

std::vector<double> subset_entropies_serial(const StateVector& psi) {
  const std::size_t count = mask_count(psi);
  const auto full = static_cast<std::uint32_t>(count - 1);
  std::vector<double> out(count, 0.0);
  out[full] = 0.0;
  for (std::uint32_t m = 1; m < full; ++m) {
    if (m & (1u << (psi.shape().parties() - 1))) continue;
    out[m] = entropy_for_mask(psi, m);
    out[full ^ m] = out[m];
  }
  return out;
}

std::vector<double> subset_entropies_omp(const StateVector& psi) {
  const std::size_t count = mask_count(psi);
  const auto full = static_cast<std::int64_t>(count - 1);
  const std::uint32_t last = 1u << (psi.shape().parties() - 1);
  std::vector<double> out(count, 0.0);
  out[static_cast<std::size_t>(full)] = 0.0;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t m = 1; m < full; ++m) {
    const auto mask = static_cast<std::uint32_t>(m);
    if (mask & last) continue;
    const double e = entropy_for_mask(psi, mask);
    out[mask] = e;
    out[static_cast<std::size_t>(full) ^ mask] = e;
  }
  return out;
}

double partition_value(std::span<const std::uint32_t> blocks, std::span<const double> entropies) {
  double entropy = 0.0;
  for (std::uint32_t b : blocks) entropy += entropies[b];
  const double k = static_cast<double>(blocks.size());
  return std::sqrt(std::max(0.0, 2.0 * entropy / k));
}

ScanResult scan_partitions_serial(const PartitionTable& table, std::span<const double> entropies,
                                  std::vector<double>* per_partition) {
  const std::size_t count = table.count();
  if (per_partition) per_partition->assign(count, 0.0);
  ScanResult best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t r = 0; r < count; ++r) {
    const double v = partition_value(table.row(r), entropies);
    if (per_partition) (*per_partition)[r] = v;
    if (v < best.value) best = {v, r};
  }
  return best;
}

ScanResult scan_partitions_omp(const PartitionTable& table, std::span<const double> entropies,
                               std::vector<double>* per_partition) {
  const auto count = static_cast<std::int64_t>(table.count());
  if (per_partition) per_partition->assign(static_cast<std::size_t>(count), 0.0);
  ScanResult best{std::numeric_limits<double>::infinity(), 0};
#pragma omp parallel
  {
    ScanResult local{std::numeric_limits<double>::infinity(), 0};
#pragma omp for schedule(static) nowait
    for (std::int64_t r = 0; r < count; ++r) {
      const auto rank = static_cast<std::size_t>(r);
      const double v = partition_value(table.row(rank), entropies);
      if (per_partition) (*per_partition)[rank] = v;
      if (better({v, rank}, local)) local = {v, rank};
    }
#pragma omp critical(kme_scan_reduce)
    if (better(local, best)) best = local;
  }
  return best;
}

}  // namespace kme::kernels
