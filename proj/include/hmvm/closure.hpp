#pragma once

#include <array>
#include <vector>

#include "hmvm/moment_state.hpp"

namespace hmvm {

/// Spatial derivative of the moment tuple (rho, u, T, f_alpha) in one direction.
/// `dcoef` has one slot per basis index; slots 0 and |alpha|=1 are ignored on
/// input (they are determined by drho and the constraints f_{e_d} = 0).
struct TupleGradient {
  double drho = 0.0;
  std::array<double, 3> du{0.0, 0.0, 0.0};
  double dT = 0.0;
  std::vector<double> dcoef;
};

/// Time rate of change of the moment tuple in the same layout.
struct TupleRate {
  double rho = 0.0;
  std::array<double, 3> u{0.0, 0.0, 0.0};
  double T = 0.0;
  std::vector<double> coef;
};

/// Streaming operator of the moment system evaluated in the cell's own basis,
/// summed over the supplied (velocity axis, gradient) pairs: returns L such
/// that the homogeneous evolution reads d(tuple)/dt + L = 0.  Includes the
/// full coupling through the moving expansion center and scale; this is the
/// unregularized quasi-linear system.
TupleRate convective_rhs(const MomentBasis& basis, const CellMomentState& cell,
                         const std::vector<std::pair<int, const TupleGradient*>>& grads);

/// Top-order closure correction for streaming along velocity axis j: nonzero
/// only on rows |alpha| = M, where it removes the part of the basis-motion
/// flux that couples to order M+1.  Fills `out` (resized to the coefficient
/// count, zeros below the top grade).  `du` and `dT` are the spatial
/// derivatives (or jumps) of center and scale along x_j; `coef` the
/// coefficients the correction is evaluated on.
void regularization_correction(const MomentBasis& basis, const std::vector<double>& coef,
                               int j, const std::array<double, 3>& du, double dT,
                               std::vector<double>& out);

/// Coefficients of v_d * f in the cell's own basis (order M+1 part dropped).
void flux_coefficients(const MomentBasis& basis, const std::vector<double>& coef,
                       double u_d, double T, int d, std::vector<double>& out);

/// Hermite-transport wave speeds along axis d: u_d -/+ c_max sqrt(T) where
/// c_max is the largest zero of the first truncated polynomial.
std::array<double, 2> char_speeds(const MomentBasis& basis, double u_d, double T);

/// Applies the magnetic rotation generator to `coef` and accumulates
/// `scale * (v - u) x B . grad_v`-moments into `out` (same basis).  Preserves
/// the zero-center and zero-trace constraints exactly.
void magnetic_rotation_apply(const MomentBasis& basis, const std::vector<double>& coef,
                             const std::array<double, 3>& B, double scale,
                             std::vector<double>& out);

} // namespace hmvm
