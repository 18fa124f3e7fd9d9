#include "kme/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "kme/errors.hpp"
#include "kme/format.hpp"
#include "kme/partitions.hpp"
#include "kme/psd.hpp"

namespace kme {

ProbeSet parse_probe_set(std::string_view name) {
  if (name == "canonical") return ProbeSet::canonical;
  if (name == "hadamard") return ProbeSet::hadamard;
  if (name == "both") return ProbeSet::both;
  throw InputError("unknown probe set '" + std::string(name) + "' (expected canonical, hadamard or both)");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_spec(const SweepSpec& s) {
  if (s.grid < 2) throw InputError("sweep grid needs at least 2 points per axis");
  if (s.n < 3) throw InputError("sweep families need n >= 3");
  if (s.n > 12) throw InputError("sweep families are limited to n <= 12");
  if (s.k < 2 || s.k > s.n) throw InputError("sweep needs 2 <= k <= n");
}

StateVector first_component(FamilyId id, int n) { return id == FamilyId::w_antiw ? make_w(n) : make_ghz(n); }
StateVector second_component(FamilyId id, int n) { return id == FamilyId::w_antiw ? make_anti_w(n) : make_w(n); }

ProbeMoments mix(const ProbeMoments& noise, const ProbeMoments& first, const ProbeMoments& second, double c0, double c1,
                 double c2) {
  ProbeMoments m = noise;
  m *= c0;
  ProbeMoments t = first;
  t *= c1;
  m += t;
  t = second;
  t *= c2;
  m += t;
  return m;
}

double safe_i_k(const ProbeMoments& m, int k) {
  try {
    return i_k_from_moments(m, k);
  } catch (const NumericIntegrityError&) {
    return kNaN;
  }
}

double safe_i_k(const DensityMatrix& rho, const Probe& p, int k) {
  try {
    return i_k_entries(rho, p, k);
  } catch (const NumericIntegrityError&) {
    return kNaN;
  }
}

// max that propagates NaN only when every candidate is NaN
double nan_max(double a, double b) {
  if (std::isnan(a)) return b;
  if (std::isnan(b)) return a;
  return std::max(a, b);
}

}  // namespace

SweepModel::SweepModel(const SweepSpec& spec) : spec_(spec) {
  check_spec(spec_);
  const int n = spec_.n;
  if (spec_.probes != ProbeSet::hadamard) pairs_.push_back(computational_pair(n));
  if (spec_.probes != ProbeSet::canonical) pairs_.push_back(hadamard_pair(n));
  const StateVector first = first_component(spec_.family, n);
  const StateVector second = second_component(spec_.family, n);
  for (const auto& pair : pairs_) {
    const Probe& x = pair.probe_x();
    const Probe& y = pair.probe_y();
    moments_.push_back({identity_moments(x), probe_moments(first, x), probe_moments(second, x), identity_moments(y),
                        probe_moments(first, y), probe_moments(second, y)});
  }
  h_ = h_k_sound(n, spec_.k);
  hbar_ = hbar_k_sound(n, spec_.k);
}

SweepRow SweepModel::finish(GridPoint p, std::span<const std::pair<double, double>> values) const {
  SweepRow row;
  row.p1 = p.p1;
  row.p2 = p.p2;
  row.i_phi0 = values[0].first;
  row.i_phi1 = values[0].second;
  double best1 = kNaN;
  double best2 = kNaN;
  for (const auto& [ix, iy] : values) {
    best1 = nan_max(best1, nan_max(h_ * ix, h_ * iy));
    best2 = nan_max(best2, hbar_ * (ix + iy));
  }
  row.bound1 = best1;
  row.bound2 = best2;
  if (spec_.k == 2) {
    row.competitor = spec_.family == FamilyId::w_antiw ? competitor_bound1_w_antiw(spec_.n, spec_.k, p.p1, p.p2)
                                                       : competitor_ghz_w_computational(spec_.n, p.p1, p.p2);
  }
  // NaN compares false, so undefined bounds never count as detection.
  row.detected = best1 > spec_.tol || best2 > spec_.tol;
  if (spec_.check_psd) row.psd_ok = is_psd(make_family(spec_.family, spec_.n, p.p1, p.p2));
  return row;
}

SweepRow SweepModel::evaluate(GridPoint p) const {
  const double noise = (1.0 - p.p1 - p.p2) / std::ldexp(1.0, spec_.n);
  std::vector<std::pair<double, double>> values;
  for (const auto& m : moments_) {
    values.emplace_back(safe_i_k(mix(m.noise_x, m.first_x, m.second_x, noise, p.p1, p.p2), spec_.k),
                        safe_i_k(mix(m.noise_y, m.first_y, m.second_y, noise, p.p1, p.p2), spec_.k));
  }
  return finish(p, values);
}

SweepRow SweepModel::evaluate_direct(GridPoint p) const {
  const DensityMatrix rho = make_family(spec_.family, spec_.n, p.p1, p.p2);
  std::vector<std::pair<double, double>> values;
  for (const auto& pair : pairs_)
    values.emplace_back(safe_i_k(rho, pair.probe_x(), spec_.k), safe_i_k(rho, pair.probe_y(), spec_.k));
  return finish(p, values);
}

namespace {

void append_grid_row(const SweepSpec& spec, int i, std::vector<GridPoint>& out) {
  const double step = 1.0 / (spec.grid - 1);
  for (int j = 0; j < spec.grid; ++j) {
    // Integer test keeps the triangle edge exact.
    if (spec.triangle && i + j > spec.grid - 1) continue;
    out.push_back({i * step, j * step});
  }
}

}  // namespace

std::vector<GridPoint> grid_points(const SweepSpec& spec) {
  check_spec(spec);
  std::vector<GridPoint> out;
  for (int i = 0; i < spec.grid; ++i) append_grid_row(spec, i, out);
  return out;
}

namespace kernels {

void sweep_points_serial(const SweepModel& model, std::span<const GridPoint> points, std::span<SweepRow> out) {
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = model.evaluate(points[i]);
}

void sweep_points_omp(const SweepModel& model, std::span<const GridPoint> points, std::span<SweepRow> out) {
  const auto count = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = model.evaluate(points[static_cast<std::size_t>(i)]);
}

}  // namespace kernels

void run_sweep(const SweepSpec& spec, const std::function<void(const SweepRow&)>& sink, Execution execution) {
  const SweepModel model(spec);
  constexpr int kRowsPerBlock = 64;
  std::vector<GridPoint> points;
  std::vector<SweepRow> rows;
  for (int i0 = 0; i0 < spec.grid; i0 += kRowsPerBlock) {
    points.clear();
    for (int i = i0; i < std::min(spec.grid, i0 + kRowsPerBlock); ++i) append_grid_row(spec, i, points);
    rows.resize(points.size());
    if (execution == Execution::parallel)
      kernels::sweep_points_omp(model, points, rows);
    else
      kernels::sweep_points_serial(model, points, rows);
    for (const auto& r : rows) sink(r);
  }
}

std::string sweep_csv_header(bool with_psd) {
  std::string h = "p1,p2,i_phi0,i_phi1,bound1,bound2,competitor,detected";
  if (with_psd) h += ",psd_ok";
  return h;
}

std::string sweep_csv_row(const SweepRow& r) {
  std::string s = format_real(r.p1) + ',' + format_real(r.p2) + ',' + format_real(r.i_phi0) + ',' + format_real(r.i_phi1) +
                  ',' + format_real(r.bound1) + ',' + format_real(r.bound2) + ',' +
                  (r.competitor ? format_real(*r.competitor) : std::string()) + ',' + (r.detected ? "1" : "0");
  if (r.psd_ok) s += *r.psd_ok ? ",1" : ",0";
  return s;
}

void write_sweep_csv(const SweepSpec& spec, std::ostream& out, Execution execution) {
  out << sweep_csv_header(spec.check_psd) << '\n';
  run_sweep(spec, [&](const SweepRow& r) { out << sweep_csv_row(r) << '\n'; }, execution);
}

void write_sweep_csv_file(const SweepSpec& spec, const std::string& path, Execution execution) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_sweep_csv(spec, out, execution);
  out.flush();
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace kme
