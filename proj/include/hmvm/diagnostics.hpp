#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "hmvm/em_solver.hpp"
#include "hmvm/grid.hpp"
#include "hmvm/moment_state.hpp"

namespace hmvm {

/// Conserved-quantity bookkeeping at one diagnostic time.
struct EnergyBreakdown {
  long long step = 0;
  double time = 0.0;
  std::vector<double> mass_species;    // per species: integral of rho
  std::vector<double> kinetic_species; // per species: (m/2) integral rho (|u|^2 + D T)
  double mass_total = 0.0;
  double kinetic_total = 0.0;
  double electric = 0.0;   // (2 kappa^2)^{-1} integral |E|^2
  double electric_1 = 0.0; // same, first component only
  double electric_2 = 0.0;
  double magnetic_exact = 0.0;   // (2 kappa^2)^{-1} integral |B|^2
  double magnetic_product = 0.0; // staggered product form, equals exact when not staggered
  double total_exact = 0.0;
  double total_product = 0.0; // the quantity conserved by the leapfrog scheme
  double gauss_residual = 0.0;
};

/// Computes all conserved quantities.  With `staggered_B` the magnetic energy
/// is also evaluated in the leapfrog product form B^{n-1/2} . B^{n+1/2}
/// (B^{n+1/2} reconstructed from the stored field and dt); otherwise the
/// product form equals the pointwise one.  The Gauss residual is
/// max_cells |div E - kappa (sum_k q_k rho_k - background)| with the
/// background taken as the spatial mean of the charge density.
EnergyBreakdown audit(const Grid& grid, const MomentBasis& basis,
                      const std::vector<SpeciesState>& species, const EmField& field,
                      const PhysicsParams& phys, double dt, bool staggered_B);

/// max over the series of |x - x_0| / |x_0| (absolute when x_0 == 0).
double relative_variation(const std::vector<double>& series);

/// Exponential-rate fit of an oscillating, decaying energy trace: detects
/// local maxima over a 5-sample window inside [t0, t1], discards the first
/// peak, and least-squares fits 0.5*log(2*energy) against time.
struct DampingFit {
  double slope = 0.0;
  int n_peaks = 0;
  bool ok = false;
};
DampingFit damping_fit(const std::vector<double>& t, const std::vector<double>& energy,
                       double t0, double t1);

/// Relative L2 distance between the base-10 logarithms of two positive time
/// series: both are linearly interpolated onto `nsamp` uniform times in
/// [t0, t1] (values floored at `floor_value` before taking the logarithm) and
/// the result is ||log a - log b|| / ||log b||.
double log_series_distance(const std::vector<double>& ta, const std::vector<double>& a,
                           const std::vector<double>& tb, const std::vector<double>& b,
                           double t0, double t1, int nsamp, double floor_value = 1e-300);

/// Marginal distribution along one velocity axis: integrates the expansion
/// over the remaining velocity dimensions on every cell.
struct MarginalSlice {
  int axis = 0;
  std::vector<double> v;     // nv sample velocities
  std::vector<double> value; // ncell x nv, row-major by cell
};
MarginalSlice marginal(const Grid& grid, const MomentBasis& basis,
                       const std::vector<CellMomentState>& cells, int axis, int nv,
                       double v_min, double v_max);

/// Streams diagnostic rows of a run into a CSV file.
class CsvWriter {
public:
  CsvWriter() = default;
  /// Opens `path` and writes the header; species names label the per-species
  /// kinetic-energy columns.
  void open(const std::string& path, const std::vector<std::string>& species_names);
  bool is_open() const { return out_.is_open(); }
  void row(const EnergyBreakdown& e, double v_mass, double v_energy);
  void close() { if (out_.is_open()) out_.close(); }

private:
  std::ofstream out_;
};

} // namespace hmvm
