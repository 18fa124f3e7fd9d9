#pragma once

// Dense complex state containers and composite-system index arithmetic.
//
// Flat-index convention: party 0 is the most significant digit, so the basis
// vector |i_0 i_1 ... i_{n-1}> sits at s = sum_l i_l * (d_{l+1} * ... * d_{n-1}).
// Every file format and every closed-form comparison in this library depends
// on that ordering.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kme {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Tolerance for validating user-supplied states (norm, trace, hermiticity).
inline constexpr double kStateTol = 1e-9;
/// Tolerance for agreement between two computational routes to one quantity.
inline constexpr double kPathTol = 1e-12;

/// Sorted, duplicate-free, nonempty set of 0-based party indices.
class SubsystemSet {
 public:
  explicit SubsystemSet(std::vector<int> parties);
  static SubsystemSet from_mask(std::uint32_t mask);

  std::span<const int> parties() const { return parties_; }
  int size() const { return static_cast<int>(parties_.size()); }
  bool contains(int party) const;
  /// Bit p set iff party p is a member. Requires every party < 32.
  std::uint32_t mask() const;
  /// Throws InputError if any party is >= n.
  void check_within(int n) const;
  /// Parties of {0..n-1} not in this set; empty result throws.
  SubsystemSet complement(int n) const;

  /// 1-based brace form, e.g. "{1,3}".
  std::string to_string() const;

  bool operator==(const SubsystemSet&) const = default;
  auto operator<=>(const SubsystemSet&) const = default;

 private:
  std::vector<int> parties_;
};

class SystemShape {
 public:
  /// Throws InputError unless dims is nonempty and every entry is >= 2.
  explicit SystemShape(std::vector<int> dims);
  static SystemShape qubits(int n);

  int parties() const { return static_cast<int>(dims_.size()); }
  int dim(int party) const { return dims_.at(static_cast<std::size_t>(party)); }
  std::span<const int> dims() const { return dims_; }
  std::size_t total() const { return total_; }
  /// Place value of a party's digit in the flat index.
  std::size_t stride(int party) const { return strides_.at(static_cast<std::size_t>(party)); }

  std::size_t encode(std::span<const int> digits) const;
  std::vector<int> decode(std::size_t flat) const;
  int digit(std::size_t flat, int party) const;

  /// Shape of the kept parties in their original order.
  SystemShape restrict_to(const SubsystemSet& keep) const;
  /// Flat indices (in this shape) of every basis state of `sub` with all
  /// other parties at level 0, enumerated in the restricted shape's order.
  std::vector<std::size_t> embedded_offsets(const SubsystemSet& sub) const;

  std::string to_string() const;

  bool operator==(const SystemShape& other) const { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

class StateVector {
 public:
  /// Throws InputError on a size mismatch or when | ||amps||^2 - 1 | > kStateTol.
  StateVector(SystemShape shape, CVector amps);

  const SystemShape& shape() const { return shape_; }
  const CVector& amps() const { return amps_; }

 private:
  SystemShape shape_;
  CVector amps_;
};

class DensityMatrix {
 public:
  /// Throws InputError on a size mismatch, a hermiticity deviation above
  /// kStateTol, or |trace - 1| > kStateTol. Positivity is not checked.
  DensityMatrix(SystemShape shape, CMatrix entries);

  const SystemShape& shape() const { return shape_; }
  const CMatrix& entries() const { return entries_; }
  cplx operator()(std::size_t r, std::size_t c) const { return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)); }

 private:
  SystemShape shape_;
  CMatrix entries_;
};

struct ValidationReport {
  double hermiticity_deviation = 0.0;   ///< max |M - M^dagger| entry
  double trace_deviation = 0.0;         ///< |tr M - 1|
  double normalization_deviation = 0.0; ///< | ||psi||^2 - 1 |
  bool size_ok = true;

  bool ok(double tol = kStateTol) const {
    return size_ok && hermiticity_deviation <= tol && trace_deviation <= tol && normalization_deviation <= tol;
  }
};

ValidationReport validate(const SystemShape& shape, const CMatrix& entries);
ValidationReport validate(const SystemShape& shape, const CVector& amps);
ValidationReport validate(const DensityMatrix& rho);
ValidationReport validate(const StateVector& psi);

DensityMatrix outer(const StateVector& psi);

/// Reduced state on `keep` (parties in original order); trace preserving.
DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemSet& keep);
/// Same as partial_trace(outer(psi), keep) without forming the D x D projector.
DensityMatrix reduced_state(const StateVector& psi, const SubsystemSet& keep);

/// Tr(rho^2) = sum |rho_rc|^2.
double purity(const DensityMatrix& rho);
/// Tr(rho_A^2) for rho_A the marginal of |psi><psi| on `keep`, computed from
/// whichever side of the cut has the smaller Gram matrix.
double marginal_purity(const StateVector& psi, const SubsystemSet& keep);

/// Marginal linear entropies below this are recomputed from singular values.
inline constexpr double kEntropyRefineBelow = 1e-4;

/// (Tr rho_A)^2 - Tr rho_A^2 for the marginal of |psi><psi| on `keep`, i.e.
/// 1 - Tr rho_A^2 for a normalised state. Small values come from the Schmidt
/// coefficients instead of 1 - purity, so a product cut gives rounding-level
/// zero rather than the square root of machine epsilon after a sqrt.
double linear_entropy(const StateVector& psi, const SubsystemSet& keep);

/// Dense tensor product of one local vector per party.
CVector product_vector(const SystemShape& shape, std::span<const CVector> sites);

/// <u|rho|v> with u, v tensor products of the given local vectors. The sum
/// runs over the support of u and v only, so computational-basis factors
/// reduce it to a single entry lookup.
cplx product_matrix_element(const DensityMatrix& rho, std::span<const CVector> bra_sites,
                            std::span<const CVector> ket_sites);

/// Local unitary U_0 (x) ... (x) U_{n-1} applied as U psi or U rho U^dagger.
StateVector apply_local(const StateVector& psi, std::span<const CMatrix> unitaries);
DensityMatrix apply_local(const DensityMatrix& rho, std::span<const CMatrix> unitaries);

// Seeded generators used by tests, benchmarks and the CLI.
StateVector random_pure(const SystemShape& shape, std::uint64_t seed);
StateVector random_product(const SystemShape& shape, std::uint64_t seed);
/// Normalised Wishart-type state G G^dagger / tr with G of size D x rank.
DensityMatrix random_mixed(const SystemShape& shape, int rank, std::uint64_t seed);
/// Haar-ish unitary from the QR decomposition of a complex Gaussian matrix.
CMatrix random_unitary(int d, std::uint64_t seed);
std::vector<CMatrix> random_local_unitaries(const SystemShape& shape, std::uint64_t seed);

}  // namespace kme
