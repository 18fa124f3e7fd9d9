#include <doctest.h>

#include <cmath>

#include "kme/bounds.hpp"
#include "kme/concurrence.hpp"
#include "kme/errors.hpp"
#include "kme/families.hpp"
#include "kme/partitions.hpp"
#include "oracles.hpp"

using namespace kme;

namespace {

CVector basis(int d, int level) { return CVector::Unit(d, level); }

// I_k from dense Kronecker vectors, written out term by term.
double dense_i_k(const DensityMatrix& rho, const Probe& p, int k) {
  const int n = p.shape().parties();
  auto sites = [&](std::vector<int> flips) {
    std::vector<CVector> s = p.x_sites();
    for (int f : flips) s[static_cast<std::size_t>(f)] = p.xp_sites()[static_cast<std::size_t>(f)];
    return s;
  };
  auto diag = [&](std::vector<int> flips) {
    const auto s = sites(flips);
    return oracle::dense_element(rho.entries(), s, s).real();
  };
  double off = 0, geo = 0, single = 0;
  for (int i = 0; i < n; ++i) {
    single += diag({i});
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      off += std::abs(oracle::dense_element(rho.entries(), sites({i}), sites({j})));
      geo += std::sqrt(std::max(0.0, diag({}) * diag({i, j})));
    }
  }
  return off - geo - (n - k) * single;
}

}  // namespace

TEST_CASE("probe validation") {
  const auto shape = SystemShape::qubits(2);
  const std::vector<CVector> x{basis(2, 0), basis(2, 0)};
  CHECK_NOTHROW(Probe(shape, x, {basis(2, 1), basis(2, 1)}));
  CHECK_THROWS_AS(Probe(shape, x, {basis(2, 0), basis(2, 1)}), InputError);
  CHECK_THROWS_AS(Probe(shape, x, {basis(2, 1) * 2.0, basis(2, 1)}), InputError);
  CHECK_THROWS_AS(Probe(shape, x, {basis(2, 1)}), InputError);
  CHECK_THROWS_AS(Probe(shape, {basis(3, 0), basis(2, 0)}, {basis(3, 1), basis(2, 1)}), InputError);
  CHECK_THROWS_AS(Probe::computational(shape, 0, 0), InputError);
  CHECK_THROWS_AS(Probe::computational(shape, 0, 2), InputError);
  CHECK_NOTHROW(Probe::computational(SystemShape({3, 3}), 2, 0));
}

TEST_CASE("probe pairs force crossed flips") {
  const auto shape = SystemShape::qubits(3);
  const ProbePair pair = computational_pair(3);
  for (int i = 0; i < 3; ++i) {
    const auto s = static_cast<std::size_t>(i);
    CHECK(pair.probe_x().xp_sites()[s] == pair.probe_y().x_sites()[s]);
    CHECK(pair.probe_y().xp_sites()[s] == pair.probe_x().x_sites()[s]);
  }
  CHECK_NOTHROW(ProbePair::from_probes(computational_probe(3), computational_partner_probe(3)));
  // Same y but independently chosen flips are rejected.
  const CVector plus = (basis(2, 0) + basis(2, 1)) / std::sqrt(2.0);
  const CVector minus = (basis(2, 0) - basis(2, 1)) / std::sqrt(2.0);
  const Probe odd(shape, {plus, plus, plus}, {minus, minus, minus});
  const CVector plus_i = cplx(0, 1) * plus;
  const Probe other(shape, {minus, minus, minus}, {plus, plus_i, plus});
  CHECK_THROWS_AS(ProbePair::from_probes(odd, other), InputError);
  CHECK_THROWS_AS(ProbePair(shape, {plus, plus, plus}, {plus, minus, minus}), InputError);
}

TEST_CASE("flipped products") {
  const Probe p = computational_probe(3);
  const std::vector<int> one{1};
  const std::vector<int> two{0, 2};
  const std::vector<int> none{};
  const auto shape = SystemShape::qubits(3);
  CHECK((product_vector(shape, flipped_product(p, one)) - CVector::Unit(8, 0b010)).norm() == 0.0);
  CHECK((product_vector(shape, flipped_product(p, two)) - CVector::Unit(8, 0b101)).norm() == 0.0);
  CHECK((product_vector(shape, flipped_product(p, none)) - CVector::Unit(8, 0)).norm() == 0.0);
  const std::vector<int> bad{3};
  const std::vector<int> three{0, 1, 2};
  CHECK_THROWS_AS(flipped_product(p, bad), InputError);
  CHECK_THROWS_AS(flipped_product(p, three), InputError);
}

TEST_CASE("pure W4 with the computational probe") {
  const DensityMatrix rho = outer(make_w(4));
  const Probe p = computational_probe(4);
  CHECK(std::abs(i_k_entries(rho, p, 2) - 1.0) < 1e-14);
  const BoundReport r = bound1(rho, p, 2);
  CHECK(std::abs(r.bound_value - 0.5) < 1e-14);
  CHECK(r.detected);
  CHECK(r.bound_value <= kme_concurrence_pure(make_w(4), 2).value);
}

TEST_CASE("W/anti-W mixture at a=0.5, b=0.2") {
  const DensityMatrix rho = make_w_antiw_mix(5, 0.5, 0.2);
  CHECK(std::abs(i_k_entries(rho, computational_probe(5), 2) - 0.171875) < 1e-14);
}

TEST_CASE("maximally mixed state is never detected") {
  const DensityMatrix mm(SystemShape::qubits(3), CMatrix::Identity(8, 8) / 8.0);
  const double v = i_k_entries(mm, computational_probe(3), 2);
  // 0 - 6 * (1/8) - 1 * 3/8
  CHECK(std::abs(v - (-9.0 / 8.0)) < 1e-15);
  CHECK(std::abs(v - closed_i_k_w_antiw(3, 2, 0, 0, WBranch::phi0)) < 1e-14);
  CHECK_FALSE(bound1(mm, computational_probe(3), 2).detected);
  const BoundReport r2 = bound2(mm, hadamard_pair(3), 2);
  CHECK_FALSE(r2.detected);
  CHECK(r2.bound_value < 0);
}

TEST_CASE("probe-basis product states score 0") {
  const DensityMatrix zero = outer(StateVector(SystemShape::qubits(3), CVector::Unit(8, 0)));
  CHECK(i_k_entries(zero, computational_probe(3), 2) == 0.0);
  CHECK(i_k_swap(zero, computational_probe(3), 2) == 0.0);
  const auto qutrits = SystemShape({3, 2, 3});
  const Probe q = Probe::computational(qutrits, 1, 0);
  const DensityMatrix top = outer(StateVector(qutrits, product_vector(qutrits, q.x_sites())));
  CHECK(i_k_entries(top, q, 3) == 0.0);
  // A generic frame leaves rounding of order eps in the flipped diagonals,
  // which the square roots lift to order sqrt(eps).
  const auto shape = SystemShape({2, 3, 2});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Probe p = random_probe(shape, seed);
    const DensityMatrix rho = outer(StateVector(shape, product_vector(shape, p.x_sites())));
    CHECK(std::abs(i_k_entries(rho, p, 2)) < 1e-7);
    CHECK(std::abs(i_k_swap(rho, p, 2)) < 1e-7);
  }
}

TEST_CASE("entry route, two-copy route and dense oracle agree") {
  const std::vector<SystemShape> shapes{SystemShape::qubits(2), SystemShape::qubits(3), SystemShape({2, 3}),
                                        SystemShape({3, 2}), SystemShape({3, 3})};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const SystemShape& shape = shapes[seed % shapes.size()];
    const DensityMatrix rho = random_mixed(shape, 1 + static_cast<int>(seed % 4), seed);
    const Probe p = random_probe(shape, seed + 500);
    for (int k = 2; k <= shape.parties(); ++k) {
      const double e = i_k_entries(rho, p, k);
      CHECK(std::abs(e - i_k_swap(rho, p, k)) < kPathTol);
      CHECK(std::abs(e - dense_i_k(rho, p, k)) < kPathTol);
    }
  }
}

TEST_CASE("GHZ3 agrees across routes") {
  const DensityMatrix rho = outer(make_ghz(3));
  CHECK(std::abs(i_k_entries(rho, computational_probe(3), 2) - i_k_swap(rho, computational_probe(3), 2)) < kPathTol);
}

TEST_CASE("two-copy route refuses large systems") {
  const DensityMatrix rho = outer(make_ghz(7));
  CHECK_THROWS_AS(i_k_swap(rho, computational_probe(7), 2), InputError);
  const DensityMatrix small = outer(make_ghz(3));
  CHECK_THROWS_AS(i_k_swap(small, computational_probe(3), 2, 4), InputError);
}

TEST_CASE("moments are linear and the pure-state route matches") {
  const auto shape = SystemShape({2, 3, 2});
  const StateVector psi = random_pure(shape, 3);
  const Probe p = random_probe(shape, 4);
  const ProbeMoments a = probe_moments(psi, p);
  const ProbeMoments b = probe_moments(outer(psi), p);
  CHECK((a.off - b.off).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(a.reference - b.reference) < 1e-15);
  CHECK((a.pairs - b.pairs).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((a.single - b.single).cwiseAbs().maxCoeff() < 1e-15);

  const DensityMatrix mm(shape, CMatrix::Identity(12, 12) / 12.0);
  ProbeMoments id = identity_moments(p);
  id *= 1.0 / 12.0;
  const ProbeMoments direct = probe_moments(mm, p);
  CHECK((id.off - direct.off).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(id.reference - direct.reference) < 1e-15);

  const DensityMatrix mix(shape, 0.3 * outer(psi).entries() + 0.7 * mm.entries());
  ProbeMoments m = a;
  m *= 0.3;
  ProbeMoments noise = identity_moments(p);
  noise *= 0.7 / 12.0;
  m += noise;
  CHECK(std::abs(i_k_from_moments(m, 2) - i_k_entries(mix, p, 2)) < kPathTol);
}

TEST_CASE("I_k is covariant under local unitaries") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto shape = seed % 2 ? SystemShape::qubits(3) : SystemShape({2, 3});
    const DensityMatrix rho = random_mixed(shape, 2, seed);
    const Probe p = random_probe(shape, seed + 100);
    const auto us = random_local_unitaries(shape, seed + 200);
    std::vector<CVector> x, xp;
    for (std::size_t i = 0; i < us.size(); ++i) {
      x.push_back(us[i] * p.x_sites()[i]);
      xp.push_back(us[i] * p.xp_sites()[i]);
    }
    const Probe moved(shape, x, xp);
    CHECK(std::abs(i_k_entries(rho, p, 2) - i_k_entries(apply_local(rho, us), moved, 2)) < 1e-10);
  }
}

TEST_CASE("bounds never exceed the exact pure-state value") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto shape = seed % 3 == 0 ? SystemShape({2, 2, 3}) : SystemShape::qubits(3 + static_cast<int>(seed % 2));
    const StateVector psi = random_pure(shape, seed);
    const DensityMatrix rho = outer(psi);
    const Probe p = random_probe(shape, seed + 1);
    const ProbePair pair = random_probe_pair(shape, seed + 2);
    for (int k = 2; k <= shape.parties(); ++k) {
      const double c = kme_concurrence_pure(psi, k).value;
      CHECK(bound1(rho, p, k).bound_value <= c + 1e-9);
      CHECK(bound2(rho, pair, k).bound_value <= c + 1e-9);
    }
  }
}

TEST_CASE("bound 2 is at most sqrt(2) times the larger bound 1") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto shape = SystemShape::qubits(3);
    const DensityMatrix rho = random_mixed(shape, 2, seed);
    const ProbePair pair = random_probe_pair(shape, seed);
    const double b2 = bound2(rho, pair, 2).bound_value;
    const double b1 = std::max(bound1(rho, pair.probe_x(), 2).bound_value, bound1(rho, pair.probe_y(), 2).bound_value);
    CHECK(b2 <= std::sqrt(2.0) * b1 + 1e-14);
  }
}

TEST_CASE("report fields") {
  const DensityMatrix rho = make_w_antiw_mix(4, 0.9, 0.05);
  const ProbePair pair = computational_pair(4);
  const BoundReport r = bound2(rho, pair, 3);
  CHECK(r.order == 2);
  CHECK(r.k == 3);
  REQUIRE(r.i_k_values.size() == 2);
  CHECK(r.prefactor == hbar_k_sound(4, 3));
  CHECK(r.bound_value == doctest::Approx(r.prefactor * (r.i_k_values[0] + r.i_k_values[1])).epsilon(1e-15));
  const BoundReport r1 = bound1(rho, pair.probe_x(), 3, 10.0);
  CHECK(r1.prefactor == h_k_sound(4, 3));
  CHECK_FALSE(r1.detected);
}

TEST_CASE("best bound picks the largest, lowest index on ties") {
  const DensityMatrix rho = make_w_antiw_mix(5, 0.6, 0.0);
  const std::vector<Probe> probes{computational_partner_probe(5), computational_probe(5), computational_probe(5)};
  const BoundReport best = best_bound(rho, std::span<const Probe>(probes), 2);
  CHECK(best.probe_index == 1);
  CHECK(best.bound_value == bound1(rho, computational_probe(5), 2).bound_value);
  const std::vector<Probe> single{computational_probe(5)};
  CHECK(best_bound(rho, std::span<const Probe>(single), 2).bound_value == bound1(rho, single[0], 2).bound_value);
  const std::vector<ProbePair> pairs{hadamard_pair(5), computational_pair(5)};
  const BoundReport bp = best_bound(rho, std::span<const ProbePair>(pairs), 2);
  CHECK(bp.bound_value == std::max(bound2(rho, pairs[0], 2).bound_value, bound2(rho, pairs[1], 2).bound_value));
  CHECK_THROWS_AS(best_bound(rho, std::span<const Probe>(), 2), InputError);
}

TEST_CASE("negative diagonal products are numeric-integrity errors") {
  // Outside the positive region: <000|rho|000> < 0 while the weight-2 diagonals are positive.
  const DensityMatrix bad = make_w_antiw_mix(3, 1.0, 0.5);
  CHECK_THROWS_AS(i_k_entries(bad, computational_probe(3), 2), NumericIntegrityError);
}

TEST_CASE("k range is checked") {
  const DensityMatrix rho = outer(make_ghz(3));
  CHECK_THROWS_AS(i_k_entries(rho, computational_probe(3), 1), InputError);
  CHECK_THROWS_AS(i_k_entries(rho, computational_probe(3), 4), InputError);
  CHECK_THROWS_AS(i_k_entries(rho, computational_probe(4), 2), InputError);
}

TEST_CASE("measurement budgets") {
  const auto b2 = measurement_budget(2);
  CHECK(b2.bound1_measurements == 5);
  CHECK(b2.bound2_measurements == 10);
  CHECK(b2.bound1_observables == 8);
  CHECK(b2.bound2_observables == 16);
  const auto b3 = measurement_budget(3);
  CHECK(b3.bound1_measurements == 10);
  CHECK(b3.bound2_measurements == 20);
  CHECK(b3.bound1_observables == 19);
  CHECK(b3.bound2_observables == 38);
  const auto b5 = measurement_budget(5);
  CHECK(b5.bound1_measurements == 26);
  CHECK(b5.bound2_measurements == 52);
  CHECK(b5.bound1_observables == 56);
  CHECK(b5.bound2_observables == 112);
  CHECK_THROWS_AS(measurement_budget(1), InputError);
}

TEST_CASE("order-1 bound is tight on W_n at k = n") {
  for (int n = 3; n <= 6; ++n) {
    CAPTURE(n);
    const StateVector w = make_w(n);
    const double c = kme_concurrence_pure(w, n).value;
    const BoundReport r = bound1(outer(w), computational_probe(n), n);
    CHECK(r.bound_value == doctest::Approx(c).epsilon(1e-12));
    // The unreduced H_k would claim more than the state has.
    CHECK(h_k(n, n) * r.i_k_values[0] > c + 0.1);
  }
}

TEST_CASE("bound 2 is refused for two parties") {
  const StateVector w = make_w(2);
  const ProbePair pair = computational_pair(2);
  CHECK_THROWS_AS(bound2(outer(w), pair, 2), InputError);
  // What it would have claimed: sqrt2 against a concurrence of 1.
  const double naive = hbar_k_sound(2, 2) * (i_k_entries(outer(w), pair.probe_x(), 2) + i_k_entries(outer(w), pair.probe_y(), 2));
  CHECK(naive == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(kme_concurrence_pure(w, 2).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bound1(outer(w), pair.probe_x(), 2).bound_value == doctest::Approx(1.0).epsilon(1e-14));
}
