#include "kme/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kme/errors.hpp"

namespace kme {

KPartition::KPartition(int n, std::vector<SubsystemSet> blocks) : n_(n), blocks_(std::move(blocks)) {
  if (n < 1) throw InputError("partition needs at least one party");
  if (blocks_.empty()) throw InputError("partition needs at least one block");
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    blocks_[b].check_within(n);
    for (int p : blocks_[b].parties()) {
      if (owner[static_cast<std::size_t>(p)] != -1) throw InputError("partition blocks overlap at party " + std::to_string(p + 1));
      owner[static_cast<std::size_t>(p)] = static_cast<int>(b);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) throw InputError("partition blocks do not cover every party");
  std::sort(blocks_.begin(), blocks_.end(),
            [](const SubsystemSet& a, const SubsystemSet& b) { return a.parties().front() < b.parties().front(); });
}

KPartition KPartition::from_labels(std::span<const int> labels) {
  const int k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (labels[p] < 0) throw InputError("negative block label");
    members[static_cast<std::size_t>(labels[p])].push_back(static_cast<int>(p));
  }
  std::vector<SubsystemSet> blocks;
  for (auto& m : members) {
    if (m.empty()) throw InputError("block labels must be contiguous");
    blocks.emplace_back(std::move(m));
  }
  return KPartition(static_cast<int>(labels.size()), std::move(blocks));
}

std::vector<std::uint32_t> KPartition::masks() const {
  std::vector<std::uint32_t> out;
  for (const auto& b : blocks_) out.push_back(b.mask());
  return out;
}

std::string KPartition::to_string() const {
  std::string s;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b) s += '|';
    s += blocks_[b].to_string();
  }
  return s;
}

namespace {

void check_nk(int n, int k) {
  if (n < 1 || k < 1 || k > n)
    throw InputError("need 1 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
}

void grow(int pos, int used, int n, int k, std::vector<int>& labels,
          const std::function<void(std::span<const int>)>& visit) {
  if (pos == n) {
    if (used == k) visit(labels);
    return;
  }
  // Remaining positions must still be able to open the missing blocks.
  const int remaining = n - pos;
  for (int b = 0; b <= std::min(used, k - 1); ++b) {
    const int now_used = std::max(used, b + 1);
    if (k - now_used > remaining - 1) continue;
    labels[static_cast<std::size_t>(pos)] = b;
    grow(pos + 1, now_used, n, k, labels, visit);
  }
}

}  // namespace

void for_each_k_partition(int n, int k, const std::function<void(std::span<const int>)>& visit) {
  check_nk(n, k);
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  grow(1, 1, n, k, labels, visit);
}

std::vector<KPartition> enumerate_k_partitions(int n, int k) {
  check_nk(n, k);
  if (n > kMaxEnumerationParties)
    throw InputError("partition enumeration is limited to n <= " + std::to_string(kMaxEnumerationParties));
  std::vector<KPartition> out;
  for_each_k_partition(n, k, [&](std::span<const int> labels) { out.push_back(KPartition::from_labels(labels)); });
  return out;
}

PartitionTable partition_table(int n, int k) {
  check_nk(n, k);
  if (n > kMaxEnumerationParties)
    throw InputError("partition enumeration is limited to n <= " + std::to_string(kMaxEnumerationParties));
  PartitionTable t{n, k, {}};
  for_each_k_partition(n, k, [&](std::span<const int> labels) {
    std::vector<std::uint32_t> row(static_cast<std::size_t>(k), 0);
    for (std::size_t p = 0; p < labels.size(); ++p) row[static_cast<std::size_t>(labels[p])] |= 1u << p;
    t.masks.insert(t.masks.end(), row.begin(), row.end());
  });
  return t;
}

KPartition PartitionTable::partition(std::size_t rank) const {
  std::vector<SubsystemSet> blocks;
  for (std::uint32_t m : row(rank)) blocks.push_back(SubsystemSet::from_mask(m));
  return KPartition(n, std::move(blocks));
}

// ---------------------------------------------------------------------------
// Prefactors

namespace {

void check_prefactor_args(int n, int k) {
  if (k < 2 || k > n)
    throw InputError("prefactor needs 2 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
}

// sqrt(k)/sqrt(den) written as k/sqrt(k*den): for k = 2 this is literally
// 2/n (n even) or 2/sqrt(n^2-1) (n odd), with no extra rounding.
double from_denominator(int k, long long den) {
  return static_cast<double>(k) / std::sqrt(static_cast<double>(static_cast<long long>(k) * den));
}

// max over compositions of n^2 - sum n_t^2, attained by the balanced split.
long long max_spread(int n, int k) {
  const long long q = n / k;
  const long long r = n % k;
  const long long sum_sq = r * (q + 1) * (q + 1) + (k - r) * q * q;
  return static_cast<long long>(n) * n - sum_sq;
}

}  // namespace

double h_k(int n, int k) {
  check_prefactor_args(n, k);
  return from_denominator(k, max_spread(n, k));
}

double h_k_bruteforce(int n, int k) {
  check_prefactor_args(n, k);
  if (n > 30) throw InputError("brute-force prefactor is limited to n <= 30");
  // The objective depends on the block sizes only through sum n_t^2, so
  // nonincreasing size sequences cover every composition.
  long long best_den = -1;
  std::vector<int> sizes;
  std::function<void(int, int, int)> rec = [&](int left, int slots, int cap) {
    if (slots == 0) {
      if (left != 0) return;
      long long sq = 0;
      for (int s : sizes) sq += static_cast<long long>(s) * s;
      best_den = std::max(best_den, static_cast<long long>(n) * n - sq);
      return;
    }
    for (int s = std::min(cap, left - (slots - 1)); s >= 1; --s) {
      sizes.push_back(s);
      rec(left - s, slots - 1, s);
      sizes.pop_back();
    }
  };
  rec(n, k, n);
  return from_denominator(k, best_den);
}

double hbar_k(int n, int k) { return h_k(n, k) / std::numbers::sqrt2; }

double h_k_sound(int n, int k) {
  check_prefactor_args(n, k);
  // 2/sqrt(k*den); same expression as h_k when k = 2.
  return 2.0 / std::sqrt(static_cast<double>(static_cast<long long>(k) * max_spread(n, k)));
}

double hbar_k_sound(int n, int k) { return h_k_sound(n, k) / std::numbers::sqrt2; }

Prefactors prefactors(int n, int k) { return {h_k(n, k), hbar_k(n, k), h_k_sound(n, k), hbar_k_sound(n, k)}; }

}  // namespace kme
