#include "kme/probe_io.hpp"

#include <fstream>
#include <ostream>

#include "kme/errors.hpp"
#include "kme/format.hpp"
#include "text_util.hpp"

namespace kme {

using detail::where;

Probe ProbeFile::probe() const {
  if (xp) return Probe(shape, x, *xp);
  if (y) return pair().probe_x();
  throw InputError("probe file has no 'xp' lines");
}

ProbePair ProbeFile::pair() const {
  if (!y) throw InputError("probe file has no 'y' lines; bound 2 needs a probe pair");
  if (xp)
    for (std::size_t i = 0; i < x.size(); ++i)
      if (((*xp)[i] - (*y)[i]).norm() > kStateTol)
        throw InputError("pair file: xp " + std::to_string(i + 1) + " must equal y " + std::to_string(i + 1));
  return ProbePair(shape, x, *y);
}

ProbeFile read_probe(std::istream& in) {
  const auto lines = detail::read_lines(in);
  if (lines.empty() || lines[0].tokens[0] != "dims:") throw InputError("probe file must start with 'dims:'");
  std::vector<int> dims;
  for (std::size_t j = 1; j < lines[0].tokens.size(); ++j) {
    const long long d = parse_integer(lines[0].tokens[j]);
    if (d < 2 || d > 1024) throw InputError(where(lines[0]) + "local dimension must be in [2, 1024]");
    dims.push_back(static_cast<int>(d));
  }
  SystemShape shape(dims);
  const auto n = static_cast<std::size_t>(shape.parties());

  std::vector<std::optional<CVector>> x(n), xp(n), y(n);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& line = lines[li];
    const auto& t = line.tokens;
    if (t.size() < 2 || t[1].empty() || t[1].back() != ':') throw InputError(where(line) + "expected '<x|xp|y> <site>: ...'");
    const long long site = parse_integer(t[1].substr(0, t[1].size() - 1));
    if (site < 1 || static_cast<std::size_t>(site) > n) throw InputError(where(line) + "site out of range");
    const auto s = static_cast<std::size_t>(site - 1);
    const int d = shape.dim(static_cast<int>(s));
    if (t.size() != 2 + 2 * static_cast<std::size_t>(d))
      throw InputError(where(line) + "expected " + std::to_string(2 * d) + " numbers for site " + std::to_string(site));
    CVector v(d);
    for (int c = 0; c < d; ++c) v(c) = cplx(parse_real(t[2 + 2 * static_cast<std::size_t>(c)]), parse_real(t[3 + 2 * static_cast<std::size_t>(c)]));
    std::vector<std::optional<CVector>>* target = nullptr;
    if (t[0] == "x") target = &x;
    else if (t[0] == "xp") target = &xp;
    else if (t[0] == "y") target = &y;
    else throw InputError(where(line) + "unknown key '" + t[0] + "'");
    if ((*target)[s]) throw InputError(where(line) + "duplicate '" + t[0] + "' line for site " + std::to_string(site));
    (*target)[s] = std::move(v);
  }

  auto gather = [&](const std::vector<std::optional<CVector>>& src, const char* key) -> std::optional<std::vector<CVector>> {
    std::size_t present = 0;
    for (const auto& v : src) present += v.has_value();
    if (present == 0) return std::nullopt;
    if (present != n) throw InputError(std::string("probe file has '") + key + "' lines for only some sites");
    std::vector<CVector> out;
    for (const auto& v : src) out.push_back(*v);
    return out;
  };
  auto xs = gather(x, "x");
  if (!xs) throw InputError("probe file has no 'x' lines");
  ProbeFile f{shape, std::move(*xs), gather(xp, "xp"), gather(y, "y")};
  if (!f.xp && !f.y) throw InputError("probe file needs 'xp' lines (or 'y' lines for a pair)");
  // Validate eagerly so malformed files fail at load time.
  if (f.y) (void)f.pair();
  else (void)f.probe();
  return f;
}

ProbeFile read_probe_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open probe file '" + path + "'");
  return read_probe(in);
}

namespace {

void write_site(std::ostream& out, const char* key, std::size_t site, const CVector& v) {
  out << key << ' ' << site + 1 << ':';
  for (Eigen::Index c = 0; c < v.size(); ++c) out << ' ' << format_exact(v(c).real()) << ' ' << format_exact(v(c).imag());
  out << '\n';
}

}  // namespace

void write_probe(std::ostream& out, const Probe& probe) {
  out << "# kme-probe v1\ndims: " << probe.shape().to_string() << '\n';
  for (std::size_t i = 0; i < probe.x_sites().size(); ++i) {
    write_site(out, "x", i, probe.x_sites()[i]);
    write_site(out, "xp", i, probe.xp_sites()[i]);
  }
}

void write_probe_pair(std::ostream& out, const ProbePair& pair) {
  const Probe& px = pair.probe_x();
  out << "# kme-probe v1\ndims: " << px.shape().to_string() << '\n';
  for (std::size_t i = 0; i < px.x_sites().size(); ++i) {
    write_site(out, "x", i, px.x_sites()[i]);
    write_site(out, "y", i, pair.probe_y().x_sites()[i]);
  }
}

}  // namespace kme
