#pragma once

#include <array>
#include <vector>

#include "hmvm/grid.hpp"
#include "hmvm/moment_state.hpp"

namespace hmvm {

using Vec3 = std::array<double, 3>;

/// One kinetic species on the grid: physical constants plus per-cell moments.
struct SpeciesState {
  SpeciesParams params;
  std::vector<CellMomentState> cells;
};

/// Electromagnetic field on cell centers.  `B_half_prev` stores the previous
/// staggered magnetic field of the leapfrog scheme so that the conserved
/// (product-form) magnetic energy can be evaluated at integer times.
struct EmField {
  std::vector<Vec3> E;
  std::vector<Vec3> B;
  std::vector<Vec3> B_half_prev;

  explicit EmField(std::size_t ncell = 0)
      : E(ncell, Vec3{0, 0, 0}), B(ncell, Vec3{0, 0, 0}), B_half_prev(ncell, Vec3{0, 0, 0}) {}
};

/// Global physics constants of the normalized system.
struct PhysicsParams {
  /// Ratio of plasma to cyclotron frequency; scales the current in Ampere's
  /// law, the charge in Gauss's law, and (inversely) the force on particles.
  double frequency_ratio = 1.0;
};

/// Periodic central-difference curl and divergence on cell centers.
void curl(const Grid& grid, const std::vector<Vec3>& F, std::vector<Vec3>& out);
std::vector<double> divergence(const Grid& grid, const std::vector<Vec3>& F);

/// Solves the coupled implicit midpoint update for the electric field and the
/// species bulk velocities in one cell:
///   E' + (dt/2) kappa sum_k qrho_k u'_k = E_rhs - (dt/2) kappa sum_k qrho_k u*_k
///   u'_k - (dt/2) c_k (E' + u'_k x B_mid) = u*_k + (dt/2) c_k (E_n + u*_k x B_mid)
/// with c_k the supplied charge-to-mass ratios (already divided by kappa) and
/// qrho_k = charge * density.  Passing zero charge densities decouples the
/// field, making each velocity update an exact midpoint rotation.
void lorentz_cell_solve(int D, double dt, double kappa, const Vec3& E_rhs, const Vec3& E_n,
                        const Vec3& B_mid, const std::vector<double>& charge_density,
                        const std::vector<double>& qm_over_kappa,
                        const std::vector<Vec3>& u_star, Vec3& E_new,
                        std::vector<Vec3>& u_new);

/// Leapfrog-magnetic split step: advances B to the half level with the old E,
/// solves the per-cell implicit electric/velocity system, rotates the higher
/// moments with the half-level B, and completes B with the new E.  Conserves
/// the product-form total energy when dt is held fixed.
void scheme2_step(const Grid& grid, const MomentBasis& basis, double dt,
                  const PhysicsParams& phys, std::vector<SpeciesState>& species,
                  EmField& field);

/// Fully implicit midpoint step solved by Picard iteration on the midpoint
/// magnetic field; conserves the exact quadratic total energy.  Returns the
/// number of iterations used; throws ConvergenceError beyond `max_iter`.
int scheme1_step(const Grid& grid, const MomentBasis& basis, double dt,
                 const PhysicsParams& phys, std::vector<SpeciesState>& species, EmField& field,
                 double tol = 1e-13, int max_iter = 200);

/// Electrostatic (Ampere-only) midpoint step: no magnetic field dynamics.
void va_step(const Grid& grid, const MomentBasis& basis, double dt, const PhysicsParams& phys,
             std::vector<SpeciesState>& species, EmField& field);

/// Curl-free electric field whose *central-difference* divergence reproduces
/// `rhs` minus its mean exactly (spectral solve with difference-consistent
/// wavenumbers).  Used to seed initial data consistent with Gauss's law.
void gauss_consistent_initial_E(const Grid& grid, const std::vector<double>& rhs,
                                std::vector<Vec3>& E);

} // namespace hmvm
