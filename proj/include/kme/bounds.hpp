#pragma once

// Tomography-free lower bounds on the k-ME concurrence of mixed states.
//
// A probe is a product state phi(x) = x_0 (x) ... (x) x_{n-1} together with a
// flip vector x'_i orthogonal to x_i at every site. phi_i flips site i,
// phi_ij flips sites i and j. With
//
//   I_k(rho, phi) = sum_{i!=j} |<phi_i|rho|phi_j>|
//                 - sum_{i!=j} sqrt(<phi|rho|phi> <phi_ij|rho|phi_ij>)
//                 - (n-k) sum_i <phi_i|rho|phi_i>
//
// the bounds are  C_k(rho) >= H_k I_k(rho, phi)                      (order 1)
//            and  C_k(rho) >= Hbar_k (I_k(rho, phi_x) + I_k(rho, phi_y))  (order 2)
// where phi_y is site-wise orthogonal to phi_x with y'_i = x_i, x'_i = y_i.
// H_k and Hbar_k here are h_k_sound and hbar_k_sound from partitions.hpp.
//
// i_k_entries is the production route. i_k_swap evaluates the same quantity
// literally on two copies with swap operators and exists to check it.

#include <cstddef>
#include <span>
#include <vector>

#include "kme/qnum.hpp"

namespace kme {

/// Default threshold above which a bound value certifies k-nonseparability.
inline constexpr double kDetectionTol = 1e-9;
/// Largest total dimension accepted by the two-copy route.
inline constexpr std::size_t kSwapMaxDim = 64;
/// Slightly negative diagonal products down to this value are rounding noise.
inline constexpr double kSqrtClamp = 1e-14;

class Probe {
 public:
  /// Throws InputError unless every x_i and x'_i is a unit vector of the
  /// party's dimension and <x_i|x'_i> = 0, all within kStateTol.
  Probe(SystemShape shape, std::vector<CVector> x_sites, std::vector<CVector> xp_sites);

  /// |level> at every site, flipping to |flip_level>.
  static Probe computational(const SystemShape& shape, int level = 0, int flip_level = 1);
  /// The same local pair (x, x') at every site of a uniform shape.
  static Probe uniform(const SystemShape& shape, const CVector& x, const CVector& xp);

  const SystemShape& shape() const { return shape_; }
  const std::vector<CVector>& x_sites() const { return x_; }
  const std::vector<CVector>& xp_sites() const { return xp_; }

 private:
  SystemShape shape_;
  std::vector<CVector> x_;
  std::vector<CVector> xp_;
};

/// Two site-wise orthogonal probes whose flips point at each other.
class ProbePair {
 public:
  /// Builds probe_x = (x, x' = y) and probe_y = (y, y' = x).
  ProbePair(SystemShape shape, std::vector<CVector> x_sites, std::vector<CVector> y_sites);
  /// Accepts two probes only if their flips already follow x'_i = y_i and
  /// y'_i = x_i; independently chosen flips are rejected.
  static ProbePair from_probes(const Probe& px, const Probe& py);

  const Probe& probe_x() const { return x_; }
  const Probe& probe_y() const { return y_; }

 private:
  Probe x_;
  Probe y_;
};

/// Local factors of phi(x) with x_i replaced by x'_i for every i in `flips`
/// (0-based, at most two sites).
std::vector<CVector> flipped_product(const Probe& probe, std::span<const int> flips);

/// Every matrix element of rho that I_k needs for one probe. The map
/// rho -> ProbeMoments is linear, so moments of a mixture are the mixture of
/// the moments.
struct ProbeMoments {
  int n = 0;
  CMatrix off;            ///< off(i,j) = <phi_i|rho|phi_j>
  double reference = 0;   ///< <phi|rho|phi>
  Eigen::MatrixXd pairs;  ///< pairs(i,j) = <phi_ij|rho|phi_ij>, symmetric, i != j
  Eigen::VectorXd single; ///< single(i) = <phi_i|rho|phi_i>

  ProbeMoments& operator+=(const ProbeMoments& o);
  ProbeMoments& operator*=(double s);
};

ProbeMoments probe_moments(const DensityMatrix& rho, const Probe& probe);
/// Moments of |psi><psi| straight from the amplitudes.
ProbeMoments probe_moments(const StateVector& psi, const Probe& probe);
/// Moments of the identity matrix (so I/D contributes moments/D).
ProbeMoments identity_moments(const Probe& probe);

/// Raw I_k, possibly negative. Throws NumericIntegrityError when a diagonal
/// product is below -kSqrtClamp.
double i_k_from_moments(const ProbeMoments& m, int k);

double i_k_entries(const DensityMatrix& rho, const Probe& probe, int k);
/// Two-copy evaluation with explicit rho (x) rho and swap permutations.
/// Throws InputError when the total dimension exceeds max_dim.
double i_k_swap(const DensityMatrix& rho, const Probe& probe, int k, std::size_t max_dim = kSwapMaxDim);

struct BoundReport {
  int k = 0;
  int order = 1;
  std::vector<double> i_k_values;  ///< one per probe that entered the bound
  double prefactor = 0;
  double bound_value = 0;          ///< raw, never clamped
  bool detected = false;           ///< bound_value > tolerance
  std::size_t probe_index = 0;     ///< maximiser in best_bound, else 0
};

BoundReport bound1(const DensityMatrix& rho, const Probe& probe, int k, double tol = kDetectionTol);
/// Needs n >= 3. With two parties the weight-1 and weight-(n-1) terms are the
/// same term counted twice, and W_2 would get sqrt2 > 1.
BoundReport bound2(const DensityMatrix& rho, const ProbePair& pair, int k, double tol = kDetectionTol);
/// Largest bound over the supplied probes; ties resolve to the lowest index.
BoundReport best_bound(const DensityMatrix& rho, std::span<const Probe> probes, int k, double tol = kDetectionTol);
BoundReport best_bound(const DensityMatrix& rho, std::span<const ProbePair> pairs, int k, double tol = kDetectionTol);

/// Experimental cost of the bounds for one fixed probe.
struct MeasurementBudget {
  long long bound1_measurements;  ///< n^2 + 1
  long long bound2_measurements;  ///< 2n^2 + 2
  long long bound1_observables;   ///< 5(n^2 - n)/2 + n + 1
  long long bound2_observables;   ///< 5n^2 - 3n + 2
};

MeasurementBudget measurement_budget(int n);

/// Random probe: x_i = U_i|0>, x'_i = U_i|1> for Haar-random U_i.
Probe random_probe(const SystemShape& shape, std::uint64_t seed);
/// Random pair: x_i = U_i|0>, y_i = U_i|1>.
ProbePair random_probe_pair(const SystemShape& shape, std::uint64_t seed);

}  // namespace kme
