#include "kme/state_io.hpp"

#include <fstream>
#include <ostream>
#include <set>

#include "kme/errors.hpp"
#include "kme/format.hpp"
#include "text_util.hpp"

namespace kme {

using detail::Line;
using detail::where;

AnyState read_state(std::istream& in) {
  const auto lines = detail::read_lines(in);
  std::string kind;
  std::vector<int> dims;
  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    const auto& t = lines[i].tokens;
    if (t[0] == "kind:") {
      if (t.size() != 2 || (t[1] != "vector" && t[1] != "matrix"))
        throw InputError(where(lines[i]) + "kind must be 'vector' or 'matrix'");
      if (!kind.empty()) throw InputError(where(lines[i]) + "repeated 'kind:' line");
      kind = t[1];
    } else if (t[0] == "dims:") {
      if (t.size() < 2) throw InputError(where(lines[i]) + "dims needs at least one entry");
      if (!dims.empty()) throw InputError(where(lines[i]) + "repeated 'dims:' line");
      for (std::size_t j = 1; j < t.size(); ++j) {
        const long long d = parse_integer(t[j]);
        if (d < 2 || d > 1024) throw InputError(where(lines[i]) + "local dimension must be in [2, 1024]");
        dims.push_back(static_cast<int>(d));
      }
    } else {
      break;
    }
  }
  if (kind.empty()) throw InputError("state file is missing 'kind:'");
  if (dims.empty()) throw InputError("state file is missing 'dims:'");
  SystemShape shape(dims);
  const auto D = shape.total();

  auto index = [&](const Line& line, const std::string& tok) {
    const long long v = parse_integer(tok);
    if (v < 0 || static_cast<std::size_t>(v) >= D) throw InputError(where(line) + "index " + tok + " out of range");
    return static_cast<Eigen::Index>(v);
  };

  if (kind == "vector") {
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(D));
    std::set<Eigen::Index> seen;
    for (; i < lines.size(); ++i) {
      const auto& t = lines[i].tokens;
      if (t.size() != 3) throw InputError(where(lines[i]) + "expected '<index> <re> <im>'");
      const auto s = index(lines[i], t[0]);
      if (!seen.insert(s).second) throw InputError(where(lines[i]) + "duplicate entry");
      amps(s) = cplx(parse_real(t[1]), parse_real(t[2]));
    }
    return StateVector(shape, std::move(amps));
  }

  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
  std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
  for (; i < lines.size(); ++i) {
    const auto& t = lines[i].tokens;
    if (t.size() != 4) throw InputError(where(lines[i]) + "expected '<row> <col> <re> <im>'");
    const auto r = index(lines[i], t[0]);
    const auto c = index(lines[i], t[1]);
    if (r > c) throw InputError(where(lines[i]) + "only row <= col entries are permitted");
    if (!seen.insert({r, c}).second) throw InputError(where(lines[i]) + "duplicate entry");
    const cplx z(parse_real(t[2]), parse_real(t[3]));
    if (r == c && std::abs(z.imag()) > kStateTol) throw InputError(where(lines[i]) + "diagonal entry must be real");
    m(r, c) = r == c ? cplx(z.real(), 0.0) : z;
    if (r != c) m(c, r) = std::conj(z);
  }
  return DensityMatrix(shape, std::move(m));
}

AnyState read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open state file '" + path + "'");
  return read_state(in);
}

void write_state(std::ostream& out, const StateVector& psi) {
  out << "# kme-state v1\nkind: vector\ndims: " << psi.shape().to_string() << '\n';
  for (Eigen::Index s = 0; s < psi.amps().size(); ++s) {
    const cplx z = psi.amps()(s);
    if (z == cplx(0.0)) continue;
    out << s << ' ' << format_exact(z.real()) << ' ' << format_exact(z.imag()) << '\n';
  }
}

void write_state(std::ostream& out, const DensityMatrix& rho) {
  out << "# kme-state v1\nkind: matrix\ndims: " << rho.shape().to_string() << '\n';
  const auto& m = rho.entries();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = r; c < m.cols(); ++c) {
      const cplx z = m(r, c);
      if (z == cplx(0.0)) continue;
      out << r << ' ' << c << ' ' << format_exact(z.real()) << ' ' << format_exact(r == c ? 0.0 : z.imag()) << '\n';
    }
}

void write_state_file(const std::string& path, const AnyState& state) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  std::visit([&](const auto& s) { write_state(out, s); }, state);
  if (!out) throw InputError("failed writing '" + path + "'");
}

DensityMatrix as_density_matrix(const AnyState& state) {
  if (const auto* psi = std::get_if<StateVector>(&state)) return outer(*psi);
  return std::get<DensityMatrix>(state);
}

}  // namespace kme
