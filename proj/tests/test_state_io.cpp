#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "kme/errors.hpp"
#include "kme/families.hpp"
#include "kme/format.hpp"
#include "kme/state_io.hpp"

using namespace kme;

namespace {

AnyState parse(const std::string& text) {
  std::istringstream in(text);
  return read_state(in);
}

}  // namespace

TEST_CASE("vector files") {
  const AnyState s = parse(
      "# kme-state v1\n"
      "kind: vector\n"
      "dims: 2 2 2\n"
      "0 0.7071067811865476 0   # |000>\n"
      "\n"
      "7 0.7071067811865476 0\n");
  const auto* psi = std::get_if<StateVector>(&s);
  REQUIRE(psi);
  CHECK(psi->shape() == SystemShape::qubits(3));
  CHECK((psi->amps() - make_ghz(3).amps()).norm() < 1e-15);
}

TEST_CASE("matrix files fill the lower triangle") {
  const AnyState s = parse(
      "kind: matrix\n"
      "dims: 2\n"
      "0 0 0.5 0\n"
      "0 1 0.25 -0.125\n"
      "1 1 0.5 0\n");
  const auto* rho = std::get_if<DensityMatrix>(&s);
  REQUIRE(rho);
  CHECK((*rho)(1, 0) == cplx(0.25, 0.125));
  CHECK((*rho)(0, 1) == cplx(0.25, -0.125));
}

TEST_CASE("round trips are exact") {
  const StateVector psi = random_pure(SystemShape({2, 3, 2}), 12);
  std::ostringstream a;
  write_state(a, psi);
  const AnyState back = parse(a.str());
  CHECK(std::get<StateVector>(back).amps() == psi.amps());

  const DensityMatrix rho = random_mixed(SystemShape({3, 2}), 3, 5);
  std::ostringstream b;
  write_state(b, rho);
  const DensityMatrix r2 = std::get<DensityMatrix>(parse(b.str()));
  // Writing keeps the upper triangle; the lower one is its conjugate.
  const CMatrix herm = rho.entries().triangularView<Eigen::Upper>().toDenseMatrix() +
                       rho.entries().triangularView<Eigen::StrictlyUpper>().toDenseMatrix().adjoint();
  CHECK(r2.entries() == herm);
  CHECK(r2.shape() == rho.shape());
}

TEST_CASE("files on disk") {
  const auto path = (std::filesystem::temp_directory_path() / "kme_state_io_test.kme").string();
  write_state_file(path, make_w_antiw_mix(3, 0.2, 0.1));
  const AnyState s = read_state_file(path);
  CHECK((as_density_matrix(s).entries() - make_w_antiw_mix(3, 0.2, 0.1).entries()).cwiseAbs().maxCoeff() < 1e-16);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_state_file(path), InputError);
  CHECK_THROWS_AS(write_state_file("/nonexistent-dir/x.kme", make_ghz(3)), InputError);
}

TEST_CASE("pure states convert to projectors") {
  const DensityMatrix rho = as_density_matrix(AnyState{make_ghz(3)});
  CHECK(std::abs(rho(0, 7) - cplx(0.5)) < 1e-15);
}

TEST_CASE("malformed files are input errors") {
  const char* bad[] = {
      "dims: 2\n0 1 0\n",                                      // missing kind
      "kind: vector\n0 1 0\n",                                 // missing dims
      "kind: tensor\ndims: 2\n0 1 0\n",                        // unknown kind
      "kind: vector\ndims: 2 1\n0 1 0\n",                      // dimension below 2
      "kind: vector\ndims: 2\n2 1 0\n",                        // index out of range
      "kind: vector\ndims: 2\n0 1 0\n0 1 0\n",                 // duplicate entry
      "kind: vector\ndims: 2\n0 1\n",                          // missing imaginary part
      "kind: vector\ndims: 2\n0 1 0 extra\n",                  // trailing token
      "kind: vector\ndims: 2\n0 one 0\n",                      // not a number
      "kind: vector\ndims: 2\n0 0.5 0\n",                      // not normalised
      "kind: matrix\ndims: 2\n1 0 0.5 0\n0 0 0.5 0\n1 1 0.5 0\n",  // lower triangle
      "kind: matrix\ndims: 2\n0 0 0.5 0.1\n1 1 0.5 0\n",       // complex diagonal
      "kind: matrix\ndims: 2\n0 0 0.7 0\n1 1 0.5 0\n",         // trace
      "kind: vector\ndims: 2\ndims: 2\n0 1 0\n",               // repeated header
      "",                                                      // empty
  };
  for (const std::string text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse(text), InputError);
  }
}

TEST_CASE("number formatting") {
  CHECK(format_real(0.408248290463863) == "0.408248290463863");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(-0.171875) == "-0.171875");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_real(1e-20) == "1e-20");
  const double x = 0.1 + 0.2;
  CHECK(parse_real(format_exact(x)) == x);
  CHECK(parse_real("2.5") == 2.5);
  CHECK_THROWS_AS(parse_real(" 2.5"), InputError);
  CHECK_THROWS_AS(parse_real("2.5x"), InputError);
  CHECK_THROWS_AS(parse_real(""), InputError);
  CHECK(parse_integer("42") == 42);
  CHECK_THROWS_AS(parse_integer("4.2"), InputError);
}
