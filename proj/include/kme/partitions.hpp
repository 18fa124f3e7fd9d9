#pragma once

// Set partitions of the parties and the prefactors that turn I_k into a
// lower bound on the k-ME concurrence.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kme/qnum.hpp"

namespace kme {

/// Largest party count for which exhaustive partition enumeration is allowed.
inline constexpr int kMaxEnumerationParties = 12;

/// Blocks A_1|...|A_k of {0..n-1}, ordered by smallest member.
class KPartition {
 public:
  /// Throws InputError unless the blocks are disjoint and cover {0..n-1}.
  KPartition(int n, std::vector<SubsystemSet> blocks);
  /// From a restricted growth string: labels[p] is the block of party p.
  static KPartition from_labels(std::span<const int> labels);

  int parties() const { return n_; }
  int size() const { return static_cast<int>(blocks_.size()); }
  const std::vector<SubsystemSet>& blocks() const { return blocks_; }
  std::vector<std::uint32_t> masks() const;

  /// 1-based, e.g. "{1,3}|{2}|{4}".
  std::string to_string() const;

  bool operator==(const KPartition&) const = default;

 private:
  int n_;
  std::vector<SubsystemSet> blocks_;
};

/// Visits every partition of {0..n-1} into exactly k blocks as a restricted
/// growth string, in lexicographic order. Rank = visit order. No guard on n.
void for_each_k_partition(int n, int k, const std::function<void(std::span<const int> labels)>& visit);

/// All k-partitions in canonical (lexicographic restricted-growth) order.
/// Requires 1 <= k <= n <= kMaxEnumerationParties.
std::vector<KPartition> enumerate_k_partitions(int n, int k);

/// Compact canonical-order table: k block masks per partition.
struct PartitionTable {
  int n = 0;
  int k = 0;
  std::vector<std::uint32_t> masks;  ///< row-major, k entries per partition

  std::size_t count() const { return k ? masks.size() / static_cast<std::size_t>(k) : 0; }
  std::span<const std::uint32_t> row(std::size_t rank) const {
    return {masks.data() + rank * static_cast<std::size_t>(k), static_cast<std::size_t>(k)};
  }
  KPartition partition(std::size_t rank) const;
};

PartitionTable partition_table(int n, int k);

struct Prefactors {
  double h_k;
  double hbar_k;
  double h_k_sound;
  double hbar_k_sound;
};

/// min over block-size compositions of sqrt(k) / sqrt(n^2 - sum n_t^2),
/// attained by the balanced split. Requires 2 <= k <= n.
double h_k(int n, int k);
/// Same minimum by exhaustive search over block-size multisets; n <= 30.
double h_k_bruteforce(int n, int k);
/// h_k / sqrt(2).
double hbar_k(int n, int k);

/// Prefactor the bounds actually use: min over compositions of
/// 2 / sqrt(k (n^2 - sum n_t^2)). Equal to h_k at k = 2 and smaller by k/2
/// beyond; h_k itself overshoots the concurrence for k >= 3 (W_3 at k = 3
/// would get 1.414 against a true value of 0.943).
double h_k_sound(int n, int k);
/// h_k_sound / sqrt(2).
double hbar_k_sound(int n, int k);
Prefactors prefactors(int n, int k);

}  // namespace kme
