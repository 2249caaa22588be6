#pragma once

#include <string>
#include <vector>

#include "hmvm/em_solver.hpp"
#include "hmvm/grid.hpp"
#include "hmvm/moment_state.hpp"

namespace hmvm {

/// Binary moment snapshot: little-endian header (M, D, coefficient count,
/// cell count) followed per cell by (rho, u[D], T, coefficients).
void write_moment_snapshot(const std::string& path, const MomentBasis& basis,
                           const std::vector<CellMomentState>& cells);

struct MomentSnapshot {
  int M = 0;
  int D = 0;
  std::vector<CellMomentState> cells;
};
MomentSnapshot read_moment_snapshot(const std::string& path);

/// Binary field snapshot: little-endian header (spatial dims, grid sizes,
/// lengths, cell count) followed per cell by E[3], B[3].
void write_field_snapshot(const std::string& path, const Grid& grid, const EmField& field);

struct FieldSnapshot {
  Grid grid;
  std::vector<Vec3> E;
  std::vector<Vec3> B;
};
FieldSnapshot read_field_snapshot(const std::string& path);

} // namespace hmvm
