#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "hmvm/hermite.hpp"
#include "hmvm/multi_index.hpp"

namespace hmvm {

/// Static per-(order, dim) context shared by all cells of a species:
/// index table plus Hermite numeric tables.  Immutable after construction.
class MomentBasis {
public:
  MomentBasis(int max_order, int dim)
      : table_(max_order, dim), hermite_(max_order, dim) {}

  int order() const { return table_.order(); }
  int dim() const { return table_.dim(); }
  int size() const { return table_.size(); }
  const MultiIndexTable& table() const { return table_; }
  const HermiteTable& hermite() const { return hermite_; }

private:
  MultiIndexTable table_;
  HermiteTable hermite_;
};

/// Physical constants of one particle species.  charge/mass enter the Lorentz
/// force as (q/m) * (omega_ce/omega_pe); the frequency ratio itself is a
/// problem-level constant (PhysicsParams).
struct SpeciesParams {
  std::string name = "s";
  double charge = 1.0;
  double mass = 1.0;
};

/// One cell's kinetic state: Hermite coefficients `coef` about the adaptive
/// expansion center `u` and scale `T`.  coef[0] is the density.
struct CellMomentState {
  std::array<double, 3> u{0.0, 0.0, 0.0};
  double T = 1.0;
  std::vector<double> coef;

  double rho() const { return coef[0]; }
};

/// Native-constraint residuals reported by macro_from_coeffs.
struct MacroMoments {
  double rho = 0.0;
  std::array<double, 3> u{0.0, 0.0, 0.0};
  double T = 0.0;
  /// |f_{e_d}| relative to rho, and |sum_d f_{2 e_d}| relative to rho*T.
  std::array<double, 3> center_violation{0.0, 0.0, 0.0};
  double scale_violation = 0.0;
};

/// Maxwellian state: f_0 = rho about (u, T), all higher coefficients zero.
CellMomentState from_maxwellian(const MomentBasis& basis, double rho,
                                const std::array<double, 3>& u, double T);

/// Dual-basis projection of an arbitrary velocity-space function onto the
/// expansion about (u, T):  f_alpha = T^{|alpha|/2}/alpha! int f He_alpha dv,
/// via tensor Gauss quadrature (order = M+8 by default).
CellMomentState project_to_basis(const MomentBasis& basis,
                                 const std::function<double(const std::array<double, 3>&)>& f,
                                 const std::array<double, 3>& u, double T,
                                 int quad_order = 0);

/// Macroscopic (rho, u, T) implied by the raw moments of the stored
/// expansion, together with the native-constraint residuals.
MacroMoments macro_from_coeffs(const MomentBasis& basis, const CellMomentState& cell);

/// Re-expands the cell about (u_new, T_new), preserving all raw velocity
/// moments int v^beta f dv with |beta| <= M exactly.  Dimension-by-dimension:
/// scale connection then center translation, each a lower-triangular 1-D map.
void recenters(const MomentBasis& basis, CellMomentState& cell,
               const std::array<double, 3>& u_new, double T_new);

/// Recenter to the state's own macroscopic (u, T) and enforce the native
/// constraints f_{e_d} = 0, sum_d f_{2 e_d} = 0 exactly.  Throws
/// PositivityError when rho <= 0 or T <= 0.
MacroMoments renormalize(const MomentBasis& basis, CellMomentState& cell,
                         std::size_t cell_index = 0);

/// Pointwise value of the truncated expansion at velocity v.
double eval_distribution(const MomentBasis& basis, const CellMomentState& cell,
                         const std::array<double, 3>& v);

/// Raw moment int v^beta f dv of the truncated expansion, computed exactly
/// from the coefficients by the velocity recurrence (|beta| need not be <= M,
/// but coefficients above M are zero).
double raw_moment(const MomentBasis& basis, const CellMomentState& cell,
                  const MultiIndex& beta);

/// Pressure tensor p_ij = delta_ij rho T + (1 + delta_ij) f_{e_i + e_j} and
/// heat flux q_i = 2 f_{3 e_i} + sum_d f_{2 e_d + e_i} of a native state.
struct DerivedMoments {
  std::array<std::array<double, 3>, 3> pressure{};
  std::array<double, 3> heat_flux{};
};
DerivedMoments derived_moments(const MomentBasis& basis, const CellMomentState& cell);

} // namespace hmvm
