#include "hmvm/convection.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <limits>

#include "hmvm/closure.hpp"
#include "hmvm/errors.hpp"

namespace hmvm {

double cfl_dt(const Grid& grid, const MomentBasis& basis,
              const std::vector<SpeciesState>& species, double cfl) {
  if (!(cfl > 0.0) || !(cfl < 1.0))
    throw std::invalid_argument("cfl_dt: CFL number must lie in (0, 1)");
  const double c = basis.hermite().speed_factor();
  double dt = std::numeric_limits<double>::infinity();
  for (const SpeciesState& sp : species)
    for (const CellMomentState& cell : sp.cells) {
      const double ct = c * std::sqrt(cell.T);
      for (int d = 0; d < grid.sdim; ++d) {
        const double speed = std::abs(cell.u[d]) + ct;
        if (!std::isfinite(speed))
          throw std::invalid_argument("cfl_dt: non-finite admissible speed");
        if (speed > 0.0) dt = std::min(dt, cfl * grid.dx[d] / speed);
      }
    }
  return dt;
}

namespace {

/// Captures at most one exception thrown inside an OpenMP region so it can be
/// rethrown on the serial path.
struct ErrorLatch {
  std::exception_ptr err = nullptr;
  void capture() {
#pragma omp critical(hmvm_error_latch)
    {
      if (!err) err = std::current_exception();
    }
  }
  void rethrow_if_set() const {
    if (err) std::rethrow_exception(err);
  }
};

} // namespace

void convection_step(const Grid& grid, const MomentBasis& basis, double dt,
                     std::vector<SpeciesState>& species, bool second_order) {
  const int n = basis.size();
  const int D = basis.dim();
  const std::size_t ncell = grid.ncell();

  for (SpeciesState& sp : species) {
    std::vector<double> inc(ncell * n, 0.0);
    for (int d = 0; d < grid.sdim; ++d) {
      // Per-face storage: flux coefficients, the basis they are expressed in,
      // and the top-order closure correction (basis-independent rows).
      std::vector<double> flux(ncell * n), reg(ncell * n);
      std::vector<std::array<double, 3>> face_u(ncell);
      std::vector<double> face_T(ncell);
      ErrorLatch latch;

#pragma omp parallel
      {
        CellMomentState L, R;
        L.coef.resize(n);
        R.coef.resize(n);
        std::vector<double> phiL(n), phiR(n), fbar(n), regv(n);
#pragma omp for schedule(static)
        for (long long ff = 0; ff < static_cast<long long>(ncell); ++ff) {
          try {
            const std::size_t f = static_cast<std::size_t>(ff);
            const std::size_t c0 = f, c1 = grid.neighbor(f, d, +1);
            const CellMomentState& Q0 = sp.cells[c0];
            const CellMomentState& Q1 = sp.cells[c1];

            bool reconstructed = false;
            if (second_order) {
              const std::size_t cm = grid.neighbor(c0, d, -1);
              const std::size_t cp = grid.neighbor(c1, d, +1);
              const CellMomentState& Qm = sp.cells[cm];
              const CellMomentState& Qp = sp.cells[cp];
              for (int i = 0; i < n; ++i) {
                L.coef[i] = Q0.coef[i] + 0.25 * (Q1.coef[i] - Qm.coef[i]);
                R.coef[i] = Q1.coef[i] - 0.25 * (Qp.coef[i] - Q0.coef[i]);
              }
              for (int dd = 0; dd < 3; ++dd) {
                L.u[dd] = Q0.u[dd] + 0.25 * (Q1.u[dd] - Qm.u[dd]);
                R.u[dd] = Q1.u[dd] - 0.25 * (Qp.u[dd] - Q0.u[dd]);
              }
              L.T = Q0.T + 0.25 * (Q1.T - Qm.T);
              R.T = Q1.T - 0.25 * (Qp.T - Q0.T);
              reconstructed = L.coef[0] > 0.0 && R.coef[0] > 0.0 && L.T > 0.0 && R.T > 0.0;
            }
            if (!reconstructed) {
              L.coef = Q0.coef;
              L.u = Q0.u;
              L.T = Q0.T;
              R.coef = Q1.coef;
              R.u = Q1.u;
              R.T = Q1.T;
            }

            const auto s0 = char_speeds(basis, Q0.u[d], Q0.T);
            const auto s1 = char_speeds(basis, Q1.u[d], Q1.T);
            const double lamL = std::min(s0[0], s1[0]);
            const double lamR = std::max(s0[1], s1[1]);

            double* fl = &flux[f * n];
            if (lamL >= 0.0) {
              flux_coefficients(basis, L.coef, L.u[d], L.T, d, phiL);
              std::copy(phiL.begin(), phiL.end(), fl);
              face_u[f] = L.u;
              face_T[f] = L.T;
            } else if (lamR <= 0.0) {
              flux_coefficients(basis, R.coef, R.u[d], R.T, d, phiR);
              std::copy(phiR.begin(), phiR.end(), fl);
              face_u[f] = R.u;
              face_T[f] = R.T;
            } else {
              // Subsonic face: re-expand both sides about the face-average
              // basis, then combine with the two-wave flux.
              std::array<double, 3> ub;
              for (int dd = 0; dd < 3; ++dd) ub[dd] = 0.5 * (L.u[dd] + R.u[dd]);
              const double Tb = 0.5 * (L.T + R.T);
              recenters(basis, L, ub, Tb);
              recenters(basis, R, ub, Tb);
              flux_coefficients(basis, L.coef, ub[d], Tb, d, phiL);
              flux_coefficients(basis, R.coef, ub[d], Tb, d, phiR);
              const double den = lamR - lamL;
              for (int i = 0; i < n; ++i)
                fl[i] = (lamR * phiL[i] - lamL * phiR[i] +
                         lamL * lamR * (R.coef[i] - L.coef[i])) /
                        den;
              face_u[f] = ub;
              face_T[f] = Tb;
            }

            // Top-order closure correction from cell-value jumps of the basis
            // parameters, evaluated on face-averaged coefficients.
            for (int i = 0; i < n; ++i) fbar[i] = 0.5 * (L.coef[i] + R.coef[i]);
            std::array<double, 3> dU{0.0, 0.0, 0.0};
            for (int dd = 0; dd < D; ++dd) dU[dd] = Q1.u[dd] - Q0.u[dd];
            regularization_correction(basis, fbar, d, dU, Q1.T - Q0.T, regv);
            std::copy(regv.begin(), regv.end(), &reg[f * n]);
          } catch (...) {
            latch.capture();
          }
        }
      }
      latch.rethrow_if_set();

      const double lam = dt / grid.dx[d];
#pragma omp parallel
      {
        CellMomentState tmp;
        tmp.coef.resize(n);
#pragma omp for schedule(static)
        for (long long cc = 0; cc < static_cast<long long>(ncell); ++cc) {
          try {
            const std::size_t c = static_cast<std::size_t>(cc);
            const std::size_t fR = c, fL = grid.neighbor(c, d, -1);
            const CellMomentState& cell = sp.cells[c];
            double* out = &inc[c * n];
            // Each face flux is re-expanded into the cell's own basis; its
            // raw moments are unchanged, so mass and energy telescope.
            tmp.coef.assign(&flux[fR * n], &flux[fR * n] + n);
            tmp.u = face_u[fR];
            tmp.T = face_T[fR];
            recenters(basis, tmp, cell.u, cell.T);
            for (int i = 0; i < n; ++i) out[i] -= lam * tmp.coef[i];
            tmp.coef.assign(&flux[fL * n], &flux[fL * n] + n);
            tmp.u = face_u[fL];
            tmp.T = face_T[fL];
            recenters(basis, tmp, cell.u, cell.T);
            for (int i = 0; i < n; ++i) out[i] += lam * tmp.coef[i];
            for (int i = 0; i < n; ++i)
              out[i] += 0.5 * lam * (reg[fR * n + i] + reg[fL * n + i]);
          } catch (...) {
            latch.capture();
          }
        }
      }
      latch.rethrow_if_set();
    }

    // Apply the accumulated increments, then re-expand every cell about its
    // updated macroscopic state (throws on loss of admissibility).
    ErrorLatch latch;
#pragma omp parallel for schedule(static)
    for (long long cc = 0; cc < static_cast<long long>(ncell); ++cc) {
      try {
        const std::size_t c = static_cast<std::size_t>(cc);
        CellMomentState& cell = sp.cells[c];
        const double* in = &inc[c * n];
        for (int i = 0; i < n; ++i) cell.coef[i] += in[i];
        renormalize(basis, cell, c);
      } catch (...) {
        latch.capture();
      }
    }
    latch.rethrow_if_set();
  }
}

} // namespace hmvm
