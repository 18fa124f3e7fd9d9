#pragma once

// Parameter sweeps over a two-parameter family on a G x G grid, producing
// the data behind detection-region plots.
//
// CSV columns: p1,p2,i_phi0,i_phi1,bound1,bound2,competitor,detected[,psd_ok]
//   i_phi0, i_phi1  I_k for the two probes of the first pair in the probe set
//   bound1          max over every probe of H_k I_k
//   bound2          max over pairs of Hbar_k (I_x + I_y)
//   competitor      earlier GME bound where one is published (k = 2), else empty
//   detected        1 iff max(bound1, bound2) > tol
// Rows are row-major: p1 = i/(G-1) outer, p2 = j/(G-1) inner.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kme/bounds.hpp"
#include "kme/families.hpp"
#include "kme/kernels.hpp"

namespace kme {

enum class ProbeSet { canonical, hadamard, both };
ProbeSet parse_probe_set(std::string_view name);

struct SweepSpec {
  FamilyId family = FamilyId::w_antiw;
  int n = 5;
  int k = 2;
  ProbeSet probes = ProbeSet::canonical;
  int grid = 101;           ///< points per axis, >= 2
  bool triangle = false;    ///< keep only p1 + p2 <= 1
  bool check_psd = false;   ///< add the psd_ok column
  double tol = kDetectionTol;
};

struct SweepRow {
  double p1 = 0, p2 = 0;
  double i_phi0 = 0, i_phi1 = 0;
  double bound1 = 0, bound2 = 0;
  std::optional<double> competitor;
  bool detected = false;
  std::optional<bool> psd_ok;
};

struct GridPoint {
  double p1, p2;
};

/// Probe moments of the family's three components, so any grid point costs
/// O(n^2) instead of a D x D construction.
class SweepModel {
 public:
  explicit SweepModel(const SweepSpec& spec);

  const SweepSpec& spec() const { return spec_; }
  SweepRow evaluate(GridPoint p) const;
  /// Rows for a direct density-matrix evaluation; used to cross-check evaluate().
  SweepRow evaluate_direct(GridPoint p) const;

 private:
  struct PairMoments {
    ProbeMoments noise_x, first_x, second_x;
    ProbeMoments noise_y, first_y, second_y;
  };
  SweepRow finish(GridPoint p, std::span<const std::pair<double, double>> pair_values) const;

  SweepSpec spec_;
  std::vector<ProbePair> pairs_;
  std::vector<PairMoments> moments_;
  double h_ = 0, hbar_ = 0;
};

/// Every grid point in CSV row order.
std::vector<GridPoint> grid_points(const SweepSpec& spec);

namespace kernels {
void sweep_points_serial(const SweepModel& model, std::span<const GridPoint> points, std::span<SweepRow> out);
void sweep_points_omp(const SweepModel& model, std::span<const GridPoint> points, std::span<SweepRow> out);
}  // namespace kernels

/// Streams rows in order to `sink`, evaluating in blocks.
void run_sweep(const SweepSpec& spec, const std::function<void(const SweepRow&)>& sink,
               Execution execution = Execution::parallel);

std::string sweep_csv_header(bool with_psd);
std::string sweep_csv_row(const SweepRow& row);
void write_sweep_csv(const SweepSpec& spec, std::ostream& out, Execution execution = Execution::parallel);
/// Throws InputError when the file cannot be written.
void write_sweep_csv_file(const SweepSpec& spec, const std::string& path, Execution execution = Execution::parallel);

}  // namespace kme
