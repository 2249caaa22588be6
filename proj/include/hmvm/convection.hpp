#pragma once

#include <vector>

#include "hmvm/em_solver.hpp"
#include "hmvm/grid.hpp"
#include "hmvm/moment_state.hpp"

namespace hmvm {

/// Largest stable time step for the streaming part: cfl * min over cells,
/// directions and species of dx_d / max |u_d -/+ c sqrt(T)|.
double cfl_dt(const Grid& grid, const MomentBasis& basis,
              const std::vector<SpeciesState>& species, double cfl);

/// One forward-Euler finite-volume streaming step for every species:
/// componentwise linear reconstruction of (u, T, coefficients) with a
/// first-order positivity fallback, HLL flux between per-face re-expanded
/// states, the top-order closure correction applied as a face-centered
/// nonconservative term, and a final re-expansion of every cell about its
/// updated macroscopic (u, T).  `second_order = false` drops reconstruction
/// (pure first-order upwinding).  Throws PositivityError when a cell leaves
/// the admissible set.
void convection_step(const Grid& grid, const MomentBasis& basis, double dt,
                     std::vector<SpeciesState>& species, bool second_order = true);

} // namespace hmvm
