#pragma once

#include <functional>
#include <vector>

#include "hmvm/diagnostics.hpp"
#include "hmvm/em_solver.hpp"
#include "hmvm/grid.hpp"
#include "hmvm/scenarios.hpp"

namespace hmvm {

/// Uniform cell-centered velocity grid covering [-v_max, v_max] per dimension.
struct DvmGrid {
  int nv = 0;
  double vmax = 0.0;
  double dv = 0.0;

  DvmGrid() = default;
  DvmGrid(int nv_, double vmax_);

  double v(int j) const { return -vmax + (static_cast<double>(j) + 0.5) * dv; }
};

/// Velocity-grid representation of one species on a one-dimensional periodic
/// spatial grid with a two-dimensional velocity space.  Storage layout:
/// f[cell * nv * nv + j2 * nv + j1] with j1 indexing the first velocity axis.
/// The reduction to two velocity dimensions assumes E3 = B1 = B2 = 0, so the
/// force never pushes matter out of the resolved velocity plane.
struct DvmState {
  DvmGrid vgrid;
  SpeciesParams params;
  std::vector<double> f;
};

/// Samples a closed-form distribution f(x, v1, v2) onto the phase-space grid.
DvmState dvm_sample(const Grid& grid, const DvmGrid& vgrid, const SpeciesParams& params,
                    const std::function<double(double, double, double)>& f0);

/// Macroscopic moments of one spatial cell by quadrature over the grid.
struct DvmMoments {
  double rho = 0.0;
  Vec3 u{0, 0, 0};
  double T = 0.0;
};
DvmMoments dvm_moments_cell(const DvmGrid& vgrid, const double* f_cell);

/// Raw velocity moment of one cell: integral of v1^b1 v2^b2 f over velocities.
double dvm_raw_moment_cell(const DvmGrid& vgrid, const double* f_cell, int b1, int b2);

/// First-order upwind transport df/dt + v1 df/dx = 0 on the periodic spatial
/// grid, applied per velocity node.  Requires v_max * dt / dx <= 1.
void dvm_transport_x(const Grid& grid, const DvmGrid& vgrid, double dt,
                     std::vector<double>& f);

/// Conservative first-order upwind acceleration step
///   df/dt + div_v [ qm_over_kappa (E + v x B) f ] = 0
/// with E, B constant inside each spatial cell and zero-flux velocity
/// boundaries (mass is conserved exactly).  Substeps automatically so that
/// each substep satisfies max|a| dt / dv <= 1/2.
void dvm_accelerate(const Grid& grid, const DvmGrid& vgrid, double dt, double qm_over_kappa,
                    const std::vector<Vec3>& E, const std::vector<Vec3>& B,
                    std::vector<double>& f);

/// Conserved-quantity audit of the velocity-grid state, matching the layout
/// produced for moment-solver runs (product-form entries equal the pointwise
/// ones since no staggered field is tracked here).
EnergyBreakdown dvm_audit(const Grid& grid, const DvmState& state, const EmField& field,
                          const PhysicsParams& phys);

struct DvmRunParams {
  int nv = 64;
  double vmax = 1.2;
  /// CFL number applied to both the fastest resolved particle speed and the
  /// unit light speed of the field subsystem.
  double cfl = 0.5;
  double t_end = 0.0;
  double diag_every = 0.0; // time between recorded rows; 0 = every step
};

struct DvmResult {
  std::vector<EnergyBreakdown> history;
  long long steps = 0;
  double dt = 0.0;
  DvmState state;
  EmField field;
};

/// Reference evolution of a single-species 1D2V scenario: per step, a half
/// spatial-transport sweep, then the leapfrog magnetic update with the same
/// per-cell implicit electric/velocity solve used by the moment solver, the
/// acceleration sweep with the time-centered electric field, and a closing
/// half transport sweep.  Requires setup.f0, one species, and a 1-D grid.
DvmResult dvm_run(const ScenarioSetup& setup, const DvmRunParams& params);

} // namespace hmvm
