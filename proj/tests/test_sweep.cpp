#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kme/errors.hpp"
#include "kme/sweep.hpp"

using namespace kme;

namespace {

std::vector<SweepRow> collect(const SweepSpec& spec, Execution exec = Execution::parallel) {
  std::vector<SweepRow> rows;
  run_sweep(spec, [&](const SweepRow& r) { rows.push_back(r); }, exec);
  return rows;
}

bool same(double a, double b, double tol) { return (std::isnan(a) && std::isnan(b)) || std::abs(a - b) < tol; }

}  // namespace

TEST_CASE("a 2 x 2 grid visits the corners in row-major order") {
  SweepSpec spec;
  spec.grid = 2;
  const auto rows = collect(spec);
  REQUIRE(rows.size() == 4);
  const double expect[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rows[i].p1 == expect[i][0]);
    CHECK(rows[i].p2 == expect[i][1]);
  }
}

TEST_CASE("triangle mode keeps p1 + p2 <= 1") {
  SweepSpec spec;
  spec.grid = 11;
  spec.triangle = true;
  const auto pts = grid_points(spec);
  CHECK(pts.size() == 66);
  for (const auto& p : pts) CHECK(p.p1 + p.p2 <= 1.0 + 1e-15);
  CHECK(collect(spec).size() == 66);
}

TEST_CASE("moment mixing matches direct density matrices") {
  for (FamilyId fam : {FamilyId::w_antiw, FamilyId::ghz_w})
    for (int n = 3; n <= 5; ++n)
      for (int k = 2; k <= 3; ++k) {
        SweepSpec spec;
        spec.family = fam;
        spec.n = n;
        spec.k = k;
        spec.probes = ProbeSet::both;
        spec.grid = 7;
        const SweepModel model(spec);
        for (const auto& p : grid_points(spec)) {
          const SweepRow a = model.evaluate(p);
          const SweepRow b = model.evaluate_direct(p);
          // Off the positive region some diagonal products vanish exactly,
          // and the two routes' rounding is lifted to ~1e-8 by the square root.
          const double tol = p.p1 + p.p2 <= 1.0 + 1e-12 ? 1e-12 : 1e-6;
          CAPTURE(n);
          CAPTURE(k);
          CAPTURE(p.p1);
          CAPTURE(p.p2);
          CHECK(same(a.i_phi0, b.i_phi0, tol));
          CHECK(same(a.i_phi1, b.i_phi1, tol));
          CHECK(same(a.bound1, b.bound1, tol));
          CHECK(same(a.bound2, b.bound2, tol));
          if (tol < 1e-6) CHECK(a.detected == b.detected);
        }
      }
}

TEST_CASE("rows agree with single-shot bounds") {
  SweepSpec spec;
  spec.n = 4;
  spec.k = 2;
  spec.grid = 5;
  spec.triangle = true;
  for (const auto& r : collect(spec)) {
    const DensityMatrix rho = make_w_antiw_mix(4, r.p1, r.p2);
    const double b1 = std::max(bound1(rho, computational_probe(4), 2).bound_value,
                               bound1(rho, computational_partner_probe(4), 2).bound_value);
    CHECK(std::abs(r.bound1 - b1) < 1e-12);
    CHECK(std::abs(r.bound2 - bound2(rho, computational_pair(4), 2).bound_value) < 1e-12);
    CHECK(std::abs(r.i_phi0 - i_k_entries(rho, computational_probe(4), 2)) < 1e-12);
    REQUIRE(r.competitor);
    CHECK(std::abs(*r.competitor - competitor_bound1_w_antiw(4, 2, r.p1, r.p2)) < 1e-15);
  }
}

TEST_CASE("serial and parallel CSV output are identical") {
  SweepSpec spec;
  spec.family = FamilyId::ghz_w;
  spec.n = 5;
  spec.probes = ProbeSet::both;
  spec.grid = 150;
  std::ostringstream a, b;
  write_sweep_csv(spec, a, Execution::serial);
  write_sweep_csv(spec, b, Execution::parallel);
  CHECK(a.str() == b.str());
  std::ostringstream c;
  write_sweep_csv(spec, c, Execution::parallel);
  CHECK(b.str() == c.str());
}

TEST_CASE("detection boundary along b = 0 for n = 5") {
  const double root = 35.0 / 67.0;
  SweepSpec spec;
  spec.n = 5;
  spec.k = 2;
  spec.grid = 201;
  double last_off = -1, first_on = 2;
  for (const auto& r : collect(spec)) {
    if (r.p2 != 0.0) continue;
    if (r.detected)
      first_on = std::min(first_on, r.p1);
    else
      last_off = std::max(last_off, r.p1);
  }
  CHECK(last_off < root);
  CHECK(first_on > root);
  CHECK(first_on - last_off == doctest::Approx(0.005));

  const SweepModel model(spec);
  double lo = 0.5, hi = 0.55;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (model.evaluate({mid, 0.0}).detected ? hi : lo) = mid;
  }
  CHECK(lo > 0.5223);
  CHECK(hi < 0.5225);
  CHECK(std::abs(hi - root) < 1e-8);
}

TEST_CASE("GHZ/W with the Hadamard probe detects near alpha = 1") {
  SweepSpec spec;
  spec.family = FamilyId::ghz_w;
  spec.n = 5;
  spec.k = 2;
  spec.probes = ProbeSet::hadamard;
  const SweepModel model(spec);
  CHECK(model.evaluate({1.0, 0.0}).detected);
  CHECK(model.evaluate({0.95, 0.02}).detected);
  CHECK_FALSE(model.evaluate({0.0, 0.0}).detected);
}

TEST_CASE("CSV layout") {
  CHECK(sweep_csv_header(false) == "p1,p2,i_phi0,i_phi1,bound1,bound2,competitor,detected");
  CHECK(sweep_csv_header(true) == "p1,p2,i_phi0,i_phi1,bound1,bound2,competitor,detected,psd_ok");
  SweepSpec spec;
  spec.n = 3;
  spec.k = 3;
  spec.grid = 2;
  spec.check_psd = true;
  std::ostringstream out;
  write_sweep_csv(spec, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == sweep_csv_header(true));
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 9);
    CHECK(cells[6].empty());  // no competitor for k = 3
  }
  CHECK(rows == 4);
  // (1,1) is outside the positive region.
  CHECK(out.str().find("\n1,1,") != std::string::npos);
  const auto rows_v = collect(spec);
  CHECK(*rows_v[0].psd_ok);
  CHECK_FALSE(*rows_v[3].psd_ok);
}

TEST_CASE("undefined square roots give NaN and no detection") {
  SweepSpec spec;
  spec.n = 3;
  spec.grid = 2;
  const SweepModel model(spec);
  // a = 1, b = 1: noise weight -1/8, weight-2 diagonals 1/3 - 1/8.
  const SweepRow r = model.evaluate({1.0, 1.0});
  CHECK(std::isnan(r.i_phi0));
  CHECK_FALSE(r.detected);
  CHECK(sweep_csv_row(r).find("nan") != std::string::npos);
}

TEST_CASE("sweep settings are validated") {
  SweepSpec spec;
  spec.grid = 1;
  CHECK_THROWS_AS(SweepModel{spec}, InputError);
  spec.grid = 3;
  spec.n = 2;
  CHECK_THROWS_AS(SweepModel{spec}, InputError);
  spec.n = 4;
  spec.k = 5;
  CHECK_THROWS_AS(SweepModel{spec}, InputError);
  CHECK(parse_probe_set("both") == ProbeSet::both);
  CHECK_THROWS_AS(parse_probe_set("random"), InputError);
  spec.k = 2;
  CHECK_THROWS_AS(write_sweep_csv_file(spec, "/nonexistent-dir/out.csv"), InputError);
}
