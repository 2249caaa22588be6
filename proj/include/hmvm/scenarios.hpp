#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hmvm/em_solver.hpp"
#include "hmvm/grid.hpp"
#include "hmvm/moment_state.hpp"

namespace hmvm {

/// User-facing run configuration; zero/negative/empty fields mean "use the
/// scenario default".
struct ScenarioConfig {
  std::string scenario = "landau";
  std::string scheme;   // "1", "2", "va", "none"; empty = scenario default
  int Nx = 0;
  int Ny = 0;
  int M = 0;
  double cfl = 0.1;
  double t_end = -1.0;
  double A = -1.0; // perturbation amplitude (>= 0 meaningful; -1 = default)
  double k = 0.0;  // perturbation wavenumber; domain length follows 2 pi / k
  double diag_every = 0.0;     // time between diagnostic rows; 0 = every step
  double snapshot_every = 0.0; // time between binary snapshots; 0 = final only
  std::string out_dir;         // empty = no file output
  int threads = 1;
  bool adaptive_dt = false; // re-evaluate the CFL bound every step
  int dvm_nv = 64;
  double dvm_vmax = 1.2;
};

/// Fully constructed initial condition plus the resolved run parameters.
struct ScenarioSetup {
  std::string name;
  Grid grid;
  PhysicsParams phys;
  std::shared_ptr<MomentBasis> basis;
  std::vector<SpeciesState> species;
  EmField field;
  std::string scheme;
  double t_end = 0.0;
  double cfl = 0.1;
  /// Closed-form initial distribution f(x, v1, v2) of the single species for
  /// velocity-grid reference runs; empty when the scenario is not 1D2V.
  std::function<double(double, double, double)> f0;
};

/// Temperature of a weighted Maxwellian mixture about its bulk velocity:
/// sum_s w_s (T_s + |u_s - u_bulk|^2 / D) with sum_s w_s = 1.
double mixture_temperature(const std::vector<double>& w,
                           const std::vector<std::array<double, 3>>& u,
                           const std::vector<double>& T, int D);

/// Exact expansion of a Maxwellian mixture about its own bulk (u, T): each
/// component is expanded in its native basis and re-expanded about the
/// mixture basis, which reproduces the dual projection exactly (fixed-order
/// quadrature cannot resolve narrow streams).
CellMomentState mixture_state(const MomentBasis& basis, const std::vector<double>& rho,
                              const std::vector<std::array<double, 3>>& u,
                              const std::vector<double>& T);

ScenarioSetup make_scenario(const ScenarioConfig& cfg);

/// Canonical scenario name ("two-stream" -> "two_stream", ...); empty if
/// unknown.
std::string canonical_scenario_name(const std::string& name);

} // namespace hmvm
