#include "kme/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kme/errors.hpp"
#include "kme/partitions.hpp"

namespace kme {

namespace {

void require_qubits(int n, int min_n) {
  if (n < min_n) throw InputError("family needs n >= " + std::to_string(min_n) + ", got " + std::to_string(n));
  if (n > 20) throw InputError("family constructors are limited to n <= 20 qubits");
}

std::size_t dim_of(int n) { return std::size_t{1} << n; }

CMatrix projector(const StateVector& psi) { return psi.amps() * psi.amps().adjoint(); }

double binomial(int n, int r) {
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

}  // namespace

StateVector make_ghz(int n) {
  require_qubits(n, 2);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim_of(n)));
  v(0) = v(v.size() - 1) = 1.0 / std::numbers::sqrt2;
  return StateVector(SystemShape::qubits(n), std::move(v));
}

StateVector make_w(int n) {
  require_qubits(n, 2);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim_of(n)));
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) v(Eigen::Index{1} << i) = amp;
  return StateVector(SystemShape::qubits(n), std::move(v));
}

StateVector make_anti_w(int n) {
  require_qubits(n, 2);
  const auto full = static_cast<Eigen::Index>(dim_of(n) - 1);
  CVector v = CVector::Zero(full + 1);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) v(full ^ (Eigen::Index{1} << i)) = amp;
  return StateVector(SystemShape::qubits(n), std::move(v));
}

DensityMatrix make_w_antiw_mix(int n, double a, double b) {
  require_qubits(n, 3);
  const auto D = static_cast<Eigen::Index>(dim_of(n));
  CMatrix m = ((1.0 - a - b) / static_cast<double>(D)) * CMatrix::Identity(D, D);
  m += a * projector(make_w(n));
  m += b * projector(make_anti_w(n));
  return DensityMatrix(SystemShape::qubits(n), std::move(m));
}

DensityMatrix make_ghz_w_mix(int n, double alpha, double beta) {
  require_qubits(n, 3);
  const auto D = static_cast<Eigen::Index>(dim_of(n));
  CMatrix m = alpha * projector(make_ghz(n));
  m += beta * projector(make_w(n));
  m += ((1.0 - alpha - beta) / static_cast<double>(D)) * CMatrix::Identity(D, D);
  return DensityMatrix(SystemShape::qubits(n), std::move(m));
}

FamilyId parse_family(std::string_view name) {
  if (name == "w-antiw") return FamilyId::w_antiw;
  if (name == "ghz-w") return FamilyId::ghz_w;
  throw InputError("unknown mixed family '" + std::string(name) + "' (expected w-antiw or ghz-w)");
}

std::string_view family_name(FamilyId id) { return id == FamilyId::w_antiw ? "w-antiw" : "ghz-w"; }

DensityMatrix make_family(FamilyId id, int n, double p1, double p2) {
  return id == FamilyId::w_antiw ? make_w_antiw_mix(n, p1, p2) : make_ghz_w_mix(n, p1, p2);
}

// ---------------------------------------------------------------------------
// Canonical probes

Probe computational_probe(int n) { return Probe::computational(SystemShape::qubits(n), 0, 1); }
Probe computational_partner_probe(int n) { return Probe::computational(SystemShape::qubits(n), 1, 0); }
ProbePair computational_pair(int n) {
  const Probe p = computational_probe(n);
  return ProbePair(p.shape(), p.x_sites(), p.xp_sites());
}

namespace {

CVector qubit(double a0, double a1) {
  CVector v(2);
  v << a0, a1;
  return v;
}

}  // namespace

Probe hadamard_probe(int n) {
  const double h = 1.0 / std::numbers::sqrt2;
  return Probe::uniform(SystemShape::qubits(n), qubit(h, -h), qubit(h, h));
}

ProbePair hadamard_pair(int n) {
  const Probe p = hadamard_probe(n);
  return ProbePair(p.shape(), p.x_sites(), p.xp_sites());
}

// ---------------------------------------------------------------------------
// Closed forms

double closed_i_k_w_antiw(int n, int k, double a, double b, WBranch which) {
  require_qubits(n, 3);
  if (k < 2 || k > n) throw InputError("closed form needs 2 <= k <= n");
  const double noise = 1.0 - a - b;
  const double own = which == WBranch::phi0 ? a : b;
  if (n > 3) {
    const double dn = n;
    return (k - 1) * own - dn * (2 * dn - k - 1) * noise / std::pow(2.0, n);
  }
  const double inner = which == WBranch::phi0 ? 3 - 3 * a + 5 * b : 3 + 5 * a - 3 * b;
  return (k - 1) * own - 0.75 * std::sqrt(noise * inner / 3.0) - 3.0 * (3 - k) * noise / 8.0;
}

double closed_bound1_ghz_w(int n, int k, double alpha, double beta, ProbeKind probe) {
  require_qubits(n, 3);
  const double hk = h_k_sound(n, k);
  const double dn = n;
  const double p2n = std::pow(2.0, n);
  const double noise = (1.0 - alpha - beta) / p2n;
  if (probe == ProbeKind::computational) {
    return hk * ((dn - 1) * beta - dn * (dn - 1) * std::sqrt((alpha / 2 + noise) * noise) -
                 dn * (dn - k) * (beta / dn + noise));
  }
  const double w_spread = (dn - 4) * (dn - 4) * beta / (p2n * dn);
  const double w_sq = (dn - 2) * (dn - 2) * beta;
  if (n % 2 == 0) {
    return hk * ((dn - 1) * w_sq / p2n -
                 dn * (dn - 1) * std::sqrt(((1 + alpha - beta) / p2n + w_spread) * (1 + alpha - beta + dn * beta) / p2n) -
                 (dn - k) * (w_sq + dn * (1 - alpha - beta)) / p2n);
  }
  return hk * ((dn - 1) * ((2 * dn * alpha + w_sq) / p2n -
                           dn * std::sqrt(((1 - alpha - beta) / p2n + w_spread) * (1 - alpha - beta + dn * beta) / p2n)) -
               (dn - k) * (w_sq + dn * (1 + alpha - beta)) / p2n);
}

double competitor_prefactor(int n) {
  if (n < 3) throw InputError("competitor prefactor needs n >= 3");
  return 1.0 / (std::numbers::sqrt2 * (n - 1));
}

double competitor_bound1_w_antiw(int n, int k, double a, double b) {
  const double c = competitor_prefactor(n);
  return std::max(c * closed_i_k_w_antiw(n, k, a, b, WBranch::phi0), c * closed_i_k_w_antiw(n, k, a, b, WBranch::phi1));
}

double competitor_ghz_w_computational(int n, double alpha, double beta) {
  require_qubits(n, 3);
  const double noise = (1.0 - alpha - beta) / std::pow(2.0, n);
  double coeff = 0.0;
  if (n % 2 == 0) {
    for (int i = 2; i < n / 2; ++i) coeff += binomial(n, i);
    coeff += 0.5 * binomial(n, n / 2);
  } else {
    for (int i = 2; i <= n / 2; ++i) coeff += binomial(n, i);
  }
  return 2.0 * (alpha / 2 - n * std::sqrt(beta / n + noise) * std::sqrt(noise) - coeff * noise);
}

double competitor_g5w5_hadamard(double alpha, double beta) {
  return 2.0 * (15.0 / 32.0 * std::pow(1 - alpha + 4 * beta / 5, 0.25) * std::pow(1 + alpha + 4 * beta / 5, 0.25));
}

}  // namespace kme
