#include "kme/qnum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "kme/errors.hpp"

namespace kme {

// ---------------------------------------------------------------------------
// SubsystemSet

SubsystemSet::SubsystemSet(std::vector<int> parties) : parties_(std::move(parties)) {
  std::sort(parties_.begin(), parties_.end());
  if (std::adjacent_find(parties_.begin(), parties_.end()) != parties_.end())
    throw InputError("subsystem set lists a party twice");
  if (parties_.empty()) throw InputError("subsystem set must be nonempty");
  if (parties_.front() < 0) throw InputError("subsystem set contains a negative party index");
}

SubsystemSet SubsystemSet::from_mask(std::uint32_t mask) {
  std::vector<int> parties;
  for (int p = 0; p < 32; ++p)
    if (mask & (1u << p)) parties.push_back(p);
  return SubsystemSet(std::move(parties));
}

bool SubsystemSet::contains(int party) const {
  return std::binary_search(parties_.begin(), parties_.end(), party);
}

std::uint32_t SubsystemSet::mask() const {
  std::uint32_t m = 0;
  for (int p : parties_) {
    if (p >= 32) throw InputError("subsystem mask requires party indices below 32");
    m |= 1u << p;
  }
  return m;
}

void SubsystemSet::check_within(int n) const {
  if (parties_.back() >= n)
    throw InputError("subsystem " + to_string() + " out of range for " + std::to_string(n) + " parties");
}

SubsystemSet SubsystemSet::complement(int n) const {
  check_within(n);
  std::vector<int> rest;
  for (int p = 0; p < n; ++p)
    if (!contains(p)) rest.push_back(p);
  return SubsystemSet(std::move(rest));
}

std::string SubsystemSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < parties_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parties_[i] + 1);
  }
  return s + "}";
}

// ---------------------------------------------------------------------------
// SystemShape

SystemShape::SystemShape(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InputError("system shape needs at least one party");
  for (int d : dims_)
    if (d < 2) throw InputError("every local dimension must be >= 2, got " + std::to_string(d));
  strides_.assign(dims_.size(), 1);
  for (std::size_t i = dims_.size(); i-- > 0;) {
    strides_[i] = total_;
    total_ *= static_cast<std::size_t>(dims_[i]);
  }
}

SystemShape SystemShape::qubits(int n) {
  if (n < 1) throw InputError("need at least one qubit");
  return SystemShape(std::vector<int>(static_cast<std::size_t>(n), 2));
}

std::size_t SystemShape::encode(std::span<const int> digits) const {
  if (digits.size() != dims_.size()) throw InputError("multi-index length does not match party count");
  std::size_t s = 0;
  for (std::size_t l = 0; l < dims_.size(); ++l) {
    if (digits[l] < 0 || digits[l] >= dims_[l]) throw InputError("multi-index digit out of range");
    s += static_cast<std::size_t>(digits[l]) * strides_[l];
  }
  return s;
}

std::vector<int> SystemShape::decode(std::size_t flat) const {
  if (flat >= total_) throw InputError("flat index out of range");
  std::vector<int> digits(dims_.size());
  for (std::size_t l = 0; l < dims_.size(); ++l) {
    digits[l] = static_cast<int>(flat / strides_[l]);
    flat %= strides_[l];
  }
  return digits;
}

int SystemShape::digit(std::size_t flat, int party) const {
  const auto p = static_cast<std::size_t>(party);
  return static_cast<int>((flat / strides_.at(p)) % static_cast<std::size_t>(dims_[p]));
}

SystemShape SystemShape::restrict_to(const SubsystemSet& keep) const {
  keep.check_within(parties());
  std::vector<int> sub;
  for (int p : keep.parties()) sub.push_back(dims_[static_cast<std::size_t>(p)]);
  return SystemShape(std::move(sub));
}

std::vector<std::size_t> SystemShape::embedded_offsets(const SubsystemSet& sub) const {
  const SystemShape local = restrict_to(sub);
  std::vector<std::size_t> out(local.total());
  const auto parts = sub.parties();
  for (std::size_t r = 0; r < out.size(); ++r) {
    std::size_t s = 0;
    for (std::size_t t = 0; t < parts.size(); ++t)
      s += static_cast<std::size_t>(local.digit(r, static_cast<int>(t))) * strides_[static_cast<std::size_t>(parts[t])];
    out[r] = s;
  }
  return out;
}

std::string SystemShape::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < dims_.size(); ++i) os << (i ? " " : "") << dims_[i];
  return os.str();
}

// ---------------------------------------------------------------------------
// Containers and validation

ValidationReport validate(const SystemShape& shape, const CMatrix& m) {
  ValidationReport rep;
  const auto D = static_cast<Eigen::Index>(shape.total());
  if (m.rows() != D || m.cols() != D) {
    rep.size_ok = false;
    return rep;
  }
  rep.hermiticity_deviation = D ? (m - m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  rep.trace_deviation = std::abs(m.trace() - cplx(1.0));
  return rep;
}

ValidationReport validate(const SystemShape& shape, const CVector& v) {
  ValidationReport rep;
  if (v.size() != static_cast<Eigen::Index>(shape.total())) {
    rep.size_ok = false;
    return rep;
  }
  rep.normalization_deviation = std::abs(v.squaredNorm() - 1.0);
  return rep;
}

ValidationReport validate(const DensityMatrix& rho) { return validate(rho.shape(), rho.entries()); }
ValidationReport validate(const StateVector& psi) { return validate(psi.shape(), psi.amps()); }

StateVector::StateVector(SystemShape shape, CVector amps) : shape_(std::move(shape)), amps_(std::move(amps)) {
  const auto rep = validate(shape_, amps_);
  if (!rep.size_ok)
    throw InputError("state vector has " + std::to_string(amps_.size()) + " amplitudes, shape needs " +
                     std::to_string(shape_.total()));
  if (rep.normalization_deviation > kStateTol)
    throw InputError("state vector is not normalized (deviation " + std::to_string(rep.normalization_deviation) + ")");
}

DensityMatrix::DensityMatrix(SystemShape shape, CMatrix entries) : shape_(std::move(shape)), entries_(std::move(entries)) {
  const auto rep = validate(shape_, entries_);
  if (!rep.size_ok) throw InputError("density matrix size does not match shape");
  if (rep.hermiticity_deviation > kStateTol) throw InputError("density matrix is not Hermitian");
  if (rep.trace_deviation > kStateTol) throw InputError("density matrix does not have unit trace");
}

DensityMatrix outer(const StateVector& psi) {
  return DensityMatrix(psi.shape(), psi.amps() * psi.amps().adjoint());
}

// ---------------------------------------------------------------------------
// Marginals

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemSet& keep) {
  const SystemShape& shape = rho.shape();
  keep.check_within(shape.parties());
  const SystemShape kept = shape.restrict_to(keep);
  if (keep.size() == shape.parties()) return rho;

  const auto kept_off = shape.embedded_offsets(keep);
  const auto env_off = shape.embedded_offsets(keep.complement(shape.parties()));
  const auto& m = rho.entries();
  const auto dk = static_cast<Eigen::Index>(kept_off.size());
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r) {
    for (Eigen::Index c = 0; c < dk; ++c) {
      cplx acc = 0.0;
      for (std::size_t e : env_off)
        acc += m(static_cast<Eigen::Index>(kept_off[static_cast<std::size_t>(r)] + e),
                 static_cast<Eigen::Index>(kept_off[static_cast<std::size_t>(c)] + e));
      out(r, c) = acc;
    }
  }
  return DensityMatrix(kept, std::move(out));
}

namespace {

// psi reshaped as a (kept x environment) coefficient matrix.
CMatrix coefficient_matrix(const StateVector& psi, const SubsystemSet& keep) {
  const SystemShape& shape = psi.shape();
  const auto kept_off = shape.embedded_offsets(keep);
  std::vector<std::size_t> env_off{0};
  if (keep.size() < shape.parties()) env_off = shape.embedded_offsets(keep.complement(shape.parties()));
  CMatrix m(static_cast<Eigen::Index>(kept_off.size()), static_cast<Eigen::Index>(env_off.size()));
  for (std::size_t r = 0; r < kept_off.size(); ++r)
    for (std::size_t e = 0; e < env_off.size(); ++e)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e)) = psi.amps()(static_cast<Eigen::Index>(kept_off[r] + env_off[e]));
  return m;
}

}  // namespace

DensityMatrix reduced_state(const StateVector& psi, const SubsystemSet& keep) {
  keep.check_within(psi.shape().parties());
  const CMatrix m = coefficient_matrix(psi, keep);
  return DensityMatrix(psi.shape().restrict_to(keep), m * m.adjoint());
}

double purity(const DensityMatrix& rho) { return rho.entries().squaredNorm(); }

namespace {

// Tr((M M^dagger)^2) = Tr((M^dagger M)^2); take the smaller Gram matrix.
double gram_purity(const CMatrix& m) {
  CMatrix gram;
  if (m.rows() <= m.cols())
    gram.noalias() = m * m.adjoint();
  else
    gram.noalias() = m.adjoint() * m;
  return gram.squaredNorm();
}

}  // namespace

double marginal_purity(const StateVector& psi, const SubsystemSet& keep) {
  keep.check_within(psi.shape().parties());
  return gram_purity(coefficient_matrix(psi, keep));
}

double linear_entropy(const StateVector& psi, const SubsystemSet& keep) {
  keep.check_within(psi.shape().parties());
  if (keep.size() == psi.shape().parties()) return 0.0;
  const CMatrix m = coefficient_matrix(psi, keep);
  const double norm2 = m.squaredNorm();
  const double coarse = norm2 * norm2 - gram_purity(m);
  if (coarse >= kEntropyRefineBelow) return coarse;
  // With singular values s_0 >= s_1 >= ..., (sum s^2)^2 - sum s^4 =
  // 2 s_0^2 t + t^2 - q where t and q sum s_j^2 and s_j^4 over j >= 1.
  // Every term is a product of small quantities, so nothing cancels.
  const Eigen::VectorXd s = Eigen::BDCSVD<CMatrix>(m).singularValues();
  double t = 0.0, q = 0.0;
  for (Eigen::Index j = 1; j < s.size(); ++j) {
    const double s2 = s(j) * s(j);
    t += s2;
    q += s2 * s2;
  }
  return std::max(0.0, 2.0 * s(0) * s(0) * t + (t * t - q));
}

// ---------------------------------------------------------------------------
// Product vectors

namespace {

void check_sites(const SystemShape& shape, std::span<const CVector> sites) {
  if (static_cast<int>(sites.size()) != shape.parties())
    throw InputError("expected one local vector per party (" + std::to_string(shape.parties()) + "), got " +
                     std::to_string(sites.size()));
  for (int p = 0; p < shape.parties(); ++p)
    if (sites[static_cast<std::size_t>(p)].size() != shape.dim(p))
      throw InputError("local vector for party " + std::to_string(p + 1) + " has wrong dimension");
}

// Nonzero entries of a product vector: flat index and amplitude.
struct Support {
  std::vector<std::size_t> index;
  std::vector<cplx> amp;
};

Support product_support(const SystemShape& shape, std::span<const CVector> sites) {
  Support s{{0}, {cplx(1.0)}};
  for (int p = 0; p < shape.parties(); ++p) {
    const CVector& v = sites[static_cast<std::size_t>(p)];
    Support next;
    for (std::size_t t = 0; t < s.index.size(); ++t)
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) == cplx(0.0)) continue;
        next.index.push_back(s.index[t] + static_cast<std::size_t>(i) * shape.stride(p));
        next.amp.push_back(s.amp[t] * v(i));
      }
    s = std::move(next);
  }
  return s;
}

}  // namespace

CVector product_vector(const SystemShape& shape, std::span<const CVector> sites) {
  check_sites(shape, sites);
  CVector out = CVector::Zero(static_cast<Eigen::Index>(shape.total()));
  const Support s = product_support(shape, sites);
  for (std::size_t t = 0; t < s.index.size(); ++t) out(static_cast<Eigen::Index>(s.index[t])) = s.amp[t];
  return out;
}

cplx product_matrix_element(const DensityMatrix& rho, std::span<const CVector> bra_sites,
                            std::span<const CVector> ket_sites) {
  check_sites(rho.shape(), bra_sites);
  check_sites(rho.shape(), ket_sites);
  const Support u = product_support(rho.shape(), bra_sites);
  const Support v = product_support(rho.shape(), ket_sites);
  const auto& m = rho.entries();
  cplx acc = 0.0;
  for (std::size_t a = 0; a < u.index.size(); ++a) {
    cplx row = 0.0;
    for (std::size_t b = 0; b < v.index.size(); ++b)
      row += m(static_cast<Eigen::Index>(u.index[a]), static_cast<Eigen::Index>(v.index[b])) * v.amp[b];
    acc += std::conj(u.amp[a]) * row;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Local unitaries

namespace {

// Applies U_p to the party-p digit of every column of `m` (rows index the space).
void apply_site(CMatrix& m, const SystemShape& shape, int p, const CMatrix& u) {
  const auto d = static_cast<std::size_t>(shape.dim(p));
  const std::size_t stride = shape.stride(p);
  const std::size_t block = stride * d;
  std::vector<cplx> tmp(d);
  for (Eigen::Index col = 0; col < m.cols(); ++col)
    for (std::size_t hi = 0; hi < shape.total(); hi += block)
      for (std::size_t lo = 0; lo < stride; ++lo) {
        for (std::size_t i = 0; i < d; ++i) {
          cplx acc = 0.0;
          for (std::size_t j = 0; j < d; ++j)
            acc += u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                   m(static_cast<Eigen::Index>(hi + j * stride + lo), col);
          tmp[i] = acc;
        }
        for (std::size_t i = 0; i < d; ++i) m(static_cast<Eigen::Index>(hi + i * stride + lo), col) = tmp[i];
      }
}

void check_unitaries(const SystemShape& shape, std::span<const CMatrix> us) {
  if (static_cast<int>(us.size()) != shape.parties()) throw InputError("expected one unitary per party");
  for (int p = 0; p < shape.parties(); ++p) {
    const CMatrix& u = us[static_cast<std::size_t>(p)];
    if (u.rows() != shape.dim(p) || u.cols() != shape.dim(p)) throw InputError("local unitary has wrong size");
  }
}

}  // namespace

StateVector apply_local(const StateVector& psi, std::span<const CMatrix> unitaries) {
  check_unitaries(psi.shape(), unitaries);
  CMatrix v = psi.amps();
  for (int p = 0; p < psi.shape().parties(); ++p) apply_site(v, psi.shape(), p, unitaries[static_cast<std::size_t>(p)]);
  return StateVector(psi.shape(), v.col(0));
}

DensityMatrix apply_local(const DensityMatrix& rho, std::span<const CMatrix> unitaries) {
  check_unitaries(rho.shape(), unitaries);
  CMatrix m = rho.entries();
  for (int p = 0; p < rho.shape().parties(); ++p) apply_site(m, rho.shape(), p, unitaries[static_cast<std::size_t>(p)]);
  CMatrix mt = m.adjoint();
  for (int p = 0; p < rho.shape().parties(); ++p) apply_site(mt, rho.shape(), p, unitaries[static_cast<std::size_t>(p)]);
  // mt = U (U rho)^dagger = U rho U^dagger
  CMatrix out = 0.5 * (mt + mt.adjoint());
  return DensityMatrix(rho.shape(), std::move(out));
}

// ---------------------------------------------------------------------------
// Generators

namespace {

CVector gaussian_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

}  // namespace

StateVector random_pure(const SystemShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CVector v = gaussian_vector(rng, static_cast<Eigen::Index>(shape.total()));
  v /= v.norm();
  return StateVector(shape, std::move(v));
}

StateVector random_product(const SystemShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CVector> sites;
  for (int p = 0; p < shape.parties(); ++p) {
    CVector v = gaussian_vector(rng, shape.dim(p));
    sites.push_back(v / v.norm());
  }
  CVector psi = product_vector(shape, sites);
  psi /= psi.norm();
  return StateVector(shape, std::move(psi));
}

DensityMatrix random_mixed(const SystemShape& shape, int rank, std::uint64_t seed) {
  if (rank < 1) throw InputError("rank must be positive");
  std::mt19937_64 rng(seed);
  const auto D = static_cast<Eigen::Index>(shape.total());
  CMatrix g(D, rank);
  for (int c = 0; c < rank; ++c) g.col(c) = gaussian_vector(rng, D);
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  CMatrix herm = 0.5 * (m + m.adjoint());
  return DensityMatrix(shape, std::move(herm));
}

CMatrix random_unitary(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CMatrix g(d, d);
  for (int c = 0; c < d; ++c) g.col(c) = gaussian_vector(rng, d);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is Haar.
  for (int i = 0; i < d; ++i) {
    const cplx diag = r(i, i);
    if (std::abs(diag) > 0) q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

std::vector<CMatrix> random_local_unitaries(const SystemShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CMatrix> out;
  for (int p = 0; p < shape.parties(); ++p) out.push_back(random_unitary(shape.dim(p), rng()));
  return out;
}

}  // namespace kme
