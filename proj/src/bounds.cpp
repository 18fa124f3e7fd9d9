#include "kme/bounds.hpp"

#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "kme/errors.hpp"
#include "kme/partitions.hpp"

namespace kme {

// ---------------------------------------------------------------------------
// Probes

namespace {

void check_probe_args(int k, int n) {
  if (n < 2) throw InputError("I_k needs at least two parties");
  if (k < 2 || k > n)
    throw InputError("I_k needs 2 <= k <= n, got k=" + std::to_string(k) + " n=" + std::to_string(n));
}

CVector basis_vector(int d, int level) {
  if (level < 0 || level >= d) throw InputError("basis level out of range");
  CVector v = CVector::Zero(d);
  v(level) = 1.0;
  return v;
}

}  // namespace

Probe::Probe(SystemShape shape, std::vector<CVector> x_sites, std::vector<CVector> xp_sites)
    : shape_(std::move(shape)), x_(std::move(x_sites)), xp_(std::move(xp_sites)) {
  const auto n = static_cast<std::size_t>(shape_.parties());
  if (x_.size() != n || xp_.size() != n) throw InputError("probe needs one x and one x' vector per party");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string site = "site " + std::to_string(i + 1);
    if (x_[i].size() != shape_.dim(static_cast<int>(i)) || xp_[i].size() != shape_.dim(static_cast<int>(i)))
      throw InputError("probe vectors at " + site + " have the wrong dimension");
    if (std::abs(x_[i].squaredNorm() - 1.0) > kStateTol || std::abs(xp_[i].squaredNorm() - 1.0) > kStateTol)
      throw InputError("probe vectors at " + site + " are not unit vectors");
    if (std::abs(x_[i].dot(xp_[i])) > kStateTol)
      throw InputError("probe flip at " + site + " is not orthogonal to x");
  }
}

Probe Probe::computational(const SystemShape& shape, int level, int flip_level) {
  std::vector<CVector> x, xp;
  for (int p = 0; p < shape.parties(); ++p) {
    x.push_back(basis_vector(shape.dim(p), level));
    xp.push_back(basis_vector(shape.dim(p), flip_level));
  }
  return Probe(shape, std::move(x), std::move(xp));
}

Probe Probe::uniform(const SystemShape& shape, const CVector& x, const CVector& xp) {
  const auto n = static_cast<std::size_t>(shape.parties());
  return Probe(shape, std::vector<CVector>(n, x), std::vector<CVector>(n, xp));
}

ProbePair::ProbePair(SystemShape shape, std::vector<CVector> x_sites, std::vector<CVector> y_sites)
    : x_(shape, x_sites, y_sites), y_(shape, y_sites, x_sites) {}

ProbePair ProbePair::from_probes(const Probe& px, const Probe& py) {
  if (!(px.shape() == py.shape())) throw InputError("probe pair shapes differ");
  for (int i = 0; i < px.shape().parties(); ++i) {
    const auto s = static_cast<std::size_t>(i);
    if ((px.xp_sites()[s] - py.x_sites()[s]).norm() > kStateTol || (py.xp_sites()[s] - px.x_sites()[s]).norm() > kStateTol)
      throw InputError("bound 2 requires x'_i = y_i and y'_i = x_i; site " + std::to_string(i + 1) + " differs");
  }
  return ProbePair(px.shape(), px.x_sites(), py.x_sites());
}

std::vector<CVector> flipped_product(const Probe& probe, std::span<const int> flips) {
  if (flips.size() > 2) throw InputError("at most two sites can be flipped");
  std::vector<CVector> sites = probe.x_sites();
  for (int f : flips) {
    if (f < 0 || f >= probe.shape().parties()) throw InputError("flip site " + std::to_string(f + 1) + " out of range");
    sites[static_cast<std::size_t>(f)] = probe.xp_sites()[static_cast<std::size_t>(f)];
  }
  return sites;
}

// ---------------------------------------------------------------------------
// Moments

ProbeMoments& ProbeMoments::operator+=(const ProbeMoments& o) {
  off += o.off;
  reference += o.reference;
  pairs += o.pairs;
  single += o.single;
  return *this;
}

ProbeMoments& ProbeMoments::operator*=(double s) {
  off *= s;
  reference *= s;
  pairs *= s;
  single *= s;
  return *this;
}

namespace {

ProbeMoments empty_moments(int n) {
  return {n, CMatrix::Zero(n, n), 0.0, Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
}

// Fills moments from a sesquilinear element function elem(bra_flips, ket_flips).
template <class Element>
ProbeMoments collect(int n, Element&& elem) {
  ProbeMoments m = empty_moments(n);
  m.reference = elem(std::vector<int>{}, std::vector<int>{}).real();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m.off(i, j) = elem(std::vector<int>{i}, std::vector<int>{j});
    m.single(i) = m.off(i, i).real();
    for (int j = i + 1; j < n; ++j) {
      const double v = elem(std::vector<int>{i, j}, std::vector<int>{i, j}).real();
      m.pairs(i, j) = v;
      m.pairs(j, i) = v;
    }
  }
  return m;
}

}  // namespace

ProbeMoments probe_moments(const DensityMatrix& rho, const Probe& probe) {
  if (!(rho.shape() == probe.shape())) throw InputError("probe shape does not match the state");
  return collect(probe.shape().parties(), [&](const std::vector<int>& bra, const std::vector<int>& ket) {
    return product_matrix_element(rho, flipped_product(probe, bra), flipped_product(probe, ket));
  });
}

ProbeMoments probe_moments(const StateVector& psi, const Probe& probe) {
  if (!(psi.shape() == probe.shape())) throw InputError("probe shape does not match the state");
  const int n = probe.shape().parties();
  // Overlaps <phi_S|psi> for S = {}, {i}, {i,j}.
  auto overlap = [&](const std::vector<int>& flips) {
    return product_vector(probe.shape(), flipped_product(probe, flips)).dot(psi.amps());
  };
  const cplx ref = overlap({});
  std::vector<cplx> one(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) one[static_cast<std::size_t>(i)] = overlap({i});
  ProbeMoments m = empty_moments(n);
  m.reference = std::norm(ref);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m.off(i, j) = one[static_cast<std::size_t>(i)] * std::conj(one[static_cast<std::size_t>(j)]);
    m.single(i) = std::norm(one[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      const double v = std::norm(overlap({i, j}));
      m.pairs(i, j) = v;
      m.pairs(j, i) = v;
    }
  }
  return m;
}

ProbeMoments identity_moments(const Probe& probe) {
  const int n = probe.shape().parties();
  return collect(n, [&](const std::vector<int>& bra, const std::vector<int>& ket) {
    const auto u = flipped_product(probe, bra);
    const auto v = flipped_product(probe, ket);
    cplx acc = 1.0;
    for (std::size_t l = 0; l < u.size(); ++l) acc *= u[l].dot(v[l]);
    return acc;
  });
}

namespace {

double checked_sqrt(double x) {
  if (x >= 0.0) return std::sqrt(x);
  if (x >= -kSqrtClamp) return 0.0;
  throw NumericIntegrityError("negative product of diagonal expectations (" + std::to_string(x) +
                              "); the operator is not positive semidefinite");
}

}  // namespace

double i_k_from_moments(const ProbeMoments& m, int k) {
  const int n = m.n;
  check_probe_args(k, n);
  double coherence = 0.0;
  double population = 0.0;
  double flipped = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      coherence += std::abs(m.off(i, j));
      population += checked_sqrt(m.reference * m.pairs(i, j));
    }
    flipped += m.single(i);
  }
  return coherence - population - static_cast<double>(n - k) * flipped;
}

double i_k_entries(const DensityMatrix& rho, const Probe& probe, int k) {
  check_probe_args(k, rho.shape().parties());
  return i_k_from_moments(probe_moments(rho, probe), k);
}

// ---------------------------------------------------------------------------
// Two-copy route

namespace {

using Permutation = std::vector<std::size_t>;

// (P w)[perm[m]] = w[m]
CVector permute(const Permutation& perm, const CVector& w) {
  CVector out(w.size());
  for (std::size_t m = 0; m < perm.size(); ++m) out(static_cast<Eigen::Index>(perm[m])) = w(static_cast<Eigen::Index>(m));
  return out;
}

Permutation total_swap(std::size_t D) {
  Permutation p(D * D);
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b) p[a * D + b] = b * D + a;
  return p;
}

Permutation site_swap(const SystemShape& shape, int site) {
  const std::size_t D = shape.total();
  const std::size_t stride = shape.stride(site);
  Permutation p(D * D);
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b) {
      const auto da = static_cast<std::size_t>(shape.digit(a, site));
      const auto db = static_cast<std::size_t>(shape.digit(b, site));
      const std::size_t a2 = a - da * stride + db * stride;
      const std::size_t b2 = b - db * stride + da * stride;
      p[a * D + b] = a2 * D + b2;
    }
  return p;
}

}  // namespace

double i_k_swap(const DensityMatrix& rho, const Probe& probe, int k, std::size_t max_dim) {
  const SystemShape& shape = rho.shape();
  const int n = shape.parties();
  check_probe_args(k, n);
  if (!(shape == probe.shape())) throw InputError("probe shape does not match the state");
  const std::size_t D = shape.total();
  if (D > max_dim)
    throw InputError("two-copy evaluation needs D <= " + std::to_string(max_dim) + " (got " + std::to_string(D) +
                     "); use i_k_entries");

  const CMatrix copies = Eigen::kroneckerProduct(rho.entries(), rho.entries()).eval();
  const Permutation p_tot = total_swap(D);
  std::vector<Permutation> p_site;
  for (int i = 0; i < n; ++i) p_site.push_back(site_swap(shape, i));

  std::vector<CVector> phi_i;
  for (int i = 0; i < n; ++i) phi_i.push_back(product_vector(shape, flipped_product(probe, std::vector<int>{i})));
  auto two_copy = [&](int i, int j) { return Eigen::kroneckerProduct(phi_i[static_cast<std::size_t>(i)], phi_i[static_cast<std::size_t>(j)]).eval(); };
  auto expect = [&](const CVector& bra, const CVector& ket) { return bra.dot(copies * ket).real(); };

  double coherence = 0.0;
  double population = 0.0;
  double flipped = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const CVector big = two_copy(i, j);
      // <Phi_ij| rho (x) rho P_tot |Phi_ij>
      coherence += checked_sqrt(expect(big, permute(p_tot, big)));
      // <Phi_ij| P_i^dagger rho (x) rho P_i |Phi_ij>
      const CVector moved = permute(p_site[static_cast<std::size_t>(i)], big);
      population += checked_sqrt(expect(moved, moved));
    }
    const CVector same = two_copy(i, i);
    const CVector moved = permute(p_site[static_cast<std::size_t>(i)], same);
    flipped += checked_sqrt(expect(moved, moved));
  }
  return coherence - population - static_cast<double>(n - k) * flipped;
}

// ---------------------------------------------------------------------------
// Bounds

BoundReport bound1(const DensityMatrix& rho, const Probe& probe, int k, double tol) {
  const int n = rho.shape().parties();
  check_probe_args(k, n);
  BoundReport r;
  r.k = k;
  r.order = 1;
  r.i_k_values = {i_k_entries(rho, probe, k)};
  r.prefactor = h_k_sound(n, k);
  r.bound_value = r.prefactor * r.i_k_values[0];
  r.detected = r.bound_value > tol;
  return r;
}

BoundReport bound2(const DensityMatrix& rho, const ProbePair& pair, int k, double tol) {
  const int n = rho.shape().parties();
  check_probe_args(k, n);
  if (n < 3) throw InputError("bound 2 needs at least three parties");
  BoundReport r;
  r.k = k;
  r.order = 2;
  r.i_k_values = {i_k_entries(rho, pair.probe_x(), k), i_k_entries(rho, pair.probe_y(), k)};
  r.prefactor = hbar_k_sound(n, k);
  r.bound_value = r.prefactor * (r.i_k_values[0] + r.i_k_values[1]);
  r.detected = r.bound_value > tol;
  return r;
}

namespace {

template <class P, class F>
BoundReport best_of(std::span<const P> probes, F&& eval) {
  if (probes.empty()) throw InputError("best_bound needs at least one probe");
  BoundReport best = eval(probes[0]);
  for (std::size_t i = 1; i < probes.size(); ++i) {
    BoundReport r = eval(probes[i]);
    if (r.bound_value > best.bound_value) {
      best = std::move(r);
      best.probe_index = i;
    }
  }
  return best;
}

}  // namespace

BoundReport best_bound(const DensityMatrix& rho, std::span<const Probe> probes, int k, double tol) {
  return best_of(probes, [&](const Probe& p) { return bound1(rho, p, k, tol); });
}

BoundReport best_bound(const DensityMatrix& rho, std::span<const ProbePair> pairs, int k, double tol) {
  return best_of(pairs, [&](const ProbePair& p) { return bound2(rho, p, k, tol); });
}

MeasurementBudget measurement_budget(int n) {
  if (n < 2) throw InputError("measurement budget needs n >= 2");
  const long long m = n;
  return {m * m + 1, 2 * m * m + 2, 5 * (m * m - m) / 2 + m + 1, 5 * m * m - 3 * m + 2};
}

Probe random_probe(const SystemShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CVector> x, xp;
  for (int p = 0; p < shape.parties(); ++p) {
    const CMatrix u = random_unitary(shape.dim(p), rng());
    x.push_back(u.col(0));
    xp.push_back(u.col(1));
  }
  return Probe(shape, std::move(x), std::move(xp));
}

ProbePair random_probe_pair(const SystemShape& shape, std::uint64_t seed) {
  const Probe p = random_probe(shape, seed);
  return ProbePair(shape, p.x_sites(), p.xp_sites());
}

}  // namespace kme
