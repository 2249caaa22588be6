#include "hmvm/em_solver.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

#include "hmvm/closure.hpp"
#include "hmvm/errors.hpp"

namespace hmvm {

namespace {

constexpr int kMaxSystem = 12; // 3 field + 3 x 3 species components

/// Gaussian elimination with partial pivoting on a small row-major system.
void solve_dense(int n, double* A, double* b) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(A[col * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(A[r * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("lorentz_cell_solve: singular system");
    if (piv != col) {
      for (int c = col; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    const double inv = 1.0 / A[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double factor = A[r * n + col] * inv;
      if (factor == 0.0) continue;
      for (int c = col; c < n; ++c) A[r * n + c] -= factor * A[col * n + c];
      b[r] -= factor * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= A[r * n + c] * b[c];
    b[r] = acc / A[r * n + r];
  }
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

} // namespace

void curl(const Grid& grid, const std::vector<Vec3>& F, std::vector<Vec3>& out) {
  const std::size_t n = grid.ncell();
  out.resize(n);
  const double ix2 = 0.5 / grid.dx[0];
  const double iy2 = grid.sdim == 2 ? 0.5 / grid.dx[1] : 0.0;
#pragma omp parallel for schedule(static)
  for (long long cc = 0; cc < static_cast<long long>(n); ++cc) {
    const std::size_t c = static_cast<std::size_t>(cc);
    const std::size_t xp = grid.neighbor(c, 0, +1), xm = grid.neighbor(c, 0, -1);
    Vec3 dFdx{(F[xp][0] - F[xm][0]) * ix2, (F[xp][1] - F[xm][1]) * ix2,
              (F[xp][2] - F[xm][2]) * ix2};
    Vec3 dFdy{0, 0, 0};
    if (grid.sdim == 2) {
      const std::size_t yp = grid.neighbor(c, 1, +1), ym = grid.neighbor(c, 1, -1);
      dFdy = {(F[yp][0] - F[ym][0]) * iy2, (F[yp][1] - F[ym][1]) * iy2,
              (F[yp][2] - F[ym][2]) * iy2};
    }
    out[c] = {dFdy[2], -dFdx[2], dFdx[1] - dFdy[0]};
  }
}

std::vector<double> divergence(const Grid& grid, const std::vector<Vec3>& F) {
  const std::size_t n = grid.ncell();
  std::vector<double> out(n);
  const double ix2 = 0.5 / grid.dx[0];
  const double iy2 = grid.sdim == 2 ? 0.5 / grid.dx[1] : 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t xp = grid.neighbor(c, 0, +1), xm = grid.neighbor(c, 0, -1);
    double d = (F[xp][0] - F[xm][0]) * ix2;
    if (grid.sdim == 2) {
      const std::size_t yp = grid.neighbor(c, 1, +1), ym = grid.neighbor(c, 1, -1);
      d += (F[yp][1] - F[ym][1]) * iy2;
    }
    out[c] = d;
  }
  return out;
}

void lorentz_cell_solve(int D, double dt, double kappa, const Vec3& E_rhs, const Vec3& E_n,
                        const Vec3& B_mid, const std::vector<double>& charge_density,
                        const std::vector<double>& qm_over_kappa,
                        const std::vector<Vec3>& u_star, Vec3& E_new,
                        std::vector<Vec3>& u_new) {
  const int S = static_cast<int>(u_star.size());
  const int n = D + S * D;
  if (n > kMaxSystem) throw std::invalid_argument("lorentz_cell_solve: too many species");
  double A[kMaxSystem * kMaxSystem] = {};
  double b[kMaxSystem] = {};
  const double h = 0.5 * dt;
  // Velocity coupling matrix of the cross product: (u x B)_i = sum_j W[i][j] u_j.
  const double W[3][3] = {{0.0, B_mid[2], -B_mid[1]},
                          {-B_mid[2], 0.0, B_mid[0]},
                          {B_mid[1], -B_mid[0], 0.0}};
  for (int i = 0; i < D; ++i) {
    A[i * n + i] = 1.0;
    double rhs = E_rhs[i];
    for (int k = 0; k < S; ++k) {
      A[i * n + (D + k * D + i)] = h * kappa * charge_density[k];
      rhs -= h * kappa * charge_density[k] * u_star[k][i];
    }
    b[i] = rhs;
  }
  for (int k = 0; k < S; ++k) {
    const double ck = qm_over_kappa[k];
    const Vec3 us_x_B = cross(u_star[k], B_mid);
    for (int i = 0; i < D; ++i) {
      const int row = D + k * D + i;
      A[row * n + row] += 1.0;
      A[row * n + i] -= h * ck;
      for (int j = 0; j < D; ++j)
        if (W[i][j] != 0.0) A[row * n + (D + k * D + j)] -= h * ck * W[i][j];
      b[row] = u_star[k][i] + h * ck * (E_n[i] + us_x_B[i]);
    }
  }
  solve_dense(n, A, b);
  E_new = {0, 0, 0};
  for (int i = 0; i < D; ++i) E_new[i] = b[i];
  u_new.assign(S, Vec3{0, 0, 0});
  for (int k = 0; k < S; ++k)
    for (int i = 0; i < D; ++i) u_new[k][i] = b[D + k * D + i];
}

namespace {

/// Shared core of all three schemes: per-cell implicit solve followed by the
/// explicit rotation of the higher moments with the midpoint magnetic field.
void apply_lorentz_cells(const Grid& grid, const MomentBasis& basis, double dt,
                         const PhysicsParams& phys, std::vector<SpeciesState>& species,
                         const std::vector<Vec3>& E_n, const std::vector<Vec3>* curlB_mid,
                         const std::vector<Vec3>* B_mid, std::vector<Vec3>& E_out,
                         bool commit_moments) {
  const int D = basis.dim();
  const int S = static_cast<int>(species.size());
  const double kappa = phys.frequency_ratio;
  const std::size_t ncell = grid.ncell();
  E_out.resize(ncell);
  std::vector<double> qm(S);
  for (int k = 0; k < S; ++k)
    qm[k] = species[k].params.charge / species[k].params.mass / kappa;

#pragma omp parallel
  {
    std::vector<double> qrho(S);
    std::vector<Vec3> u_star(S), u_new(S);
    std::vector<double> work;
#pragma omp for schedule(static)
    for (long long cc = 0; cc < static_cast<long long>(ncell); ++cc) {
      const std::size_t c = static_cast<std::size_t>(cc);
      for (int k = 0; k < S; ++k) {
        qrho[k] = species[k].params.charge * species[k].cells[c].rho();
        u_star[k] = species[k].cells[c].u;
      }
      Vec3 E_rhs = E_n[c];
      if (curlB_mid) {
        for (int i = 0; i < 3; ++i) E_rhs[i] += dt * (*curlB_mid)[c][i];
      }
      const Vec3 Bm = B_mid ? (*B_mid)[c] : Vec3{0, 0, 0};
      lorentz_cell_solve(D, dt, kappa, E_rhs, E_n[c], Bm, qrho, qm, u_star, E_out[c],
                         u_new);
      if (!commit_moments) continue;
      for (int k = 0; k < S; ++k) {
        CellMomentState& cell = species[k].cells[c];
        cell.u = u_new[k];
        if (B_mid && (Bm[0] != 0.0 || Bm[1] != 0.0 || Bm[2] != 0.0)) {
          work = cell.coef;
          magnetic_rotation_apply(basis, work, Bm, dt * qm[k], cell.coef);
        }
      }
    }
  }
}

} // namespace

void scheme2_step(const Grid& grid, const MomentBasis& basis, double dt,
                  const PhysicsParams& phys, std::vector<SpeciesState>& species,
                  EmField& field) {
  const std::size_t ncell = grid.ncell();
  std::vector<Vec3> curl_buf, B_half(ncell), curlB(ncell), E_new;
  curl(grid, field.E, curl_buf);
  for (std::size_t c = 0; c < ncell; ++c)
    for (int i = 0; i < 3; ++i) B_half[c][i] = field.B[c][i] - 0.5 * dt * curl_buf[c][i];
  curl(grid, B_half, curlB);
  apply_lorentz_cells(grid, basis, dt, phys, species, field.E, &curlB, &B_half, E_new,
                      true);
  field.E = std::move(E_new);
  curl(grid, field.E, curl_buf);
  for (std::size_t c = 0; c < ncell; ++c)
    for (int i = 0; i < 3; ++i) field.B[c][i] = B_half[c][i] - 0.5 * dt * curl_buf[c][i];
  field.B_half_prev = std::move(B_half);
}

int scheme1_step(const Grid& grid, const MomentBasis& basis, double dt,
                 const PhysicsParams& phys, std::vector<SpeciesState>& species, EmField& field,
                 double tol, int max_iter) {
  const std::size_t ncell = grid.ncell();
  std::vector<Vec3> B_bar = field.B, curlB(ncell), E_cand, E_bar(ncell), curlE(ncell),
                    B_new(ncell), B_bar_next(ncell);
  int iters = 0;
  for (;;) {
    ++iters;
    curl(grid, B_bar, curlB);
    apply_lorentz_cells(grid, basis, dt, phys, species, field.E, &curlB, &B_bar, E_cand,
                        false);
    for (std::size_t c = 0; c < ncell; ++c)
      for (int i = 0; i < 3; ++i) E_bar[c][i] = 0.5 * (field.E[c][i] + E_cand[c][i]);
    curl(grid, E_bar, curlE);
    double delta = 0.0, scale = 1.0;
    for (std::size_t c = 0; c < ncell; ++c)
      for (int i = 0; i < 3; ++i) {
        B_new[c][i] = field.B[c][i] - dt * curlE[c][i];
        B_bar_next[c][i] = 0.5 * (field.B[c][i] + B_new[c][i]);
        delta = std::max(delta, std::abs(B_bar_next[c][i] - B_bar[c][i]));
        scale = std::max(scale, std::abs(B_bar_next[c][i]));
      }
    B_bar.swap(B_bar_next);
    if (delta <= tol * scale) break;
    if (iters >= max_iter)
      throw ConvergenceError("implicit field iteration did not converge");
  }
  // Converged midpoint field: now commit velocities, moments, and fields.
  curl(grid, B_bar, curlB);
  apply_lorentz_cells(grid, basis, dt, phys, species, field.E, &curlB, &B_bar, E_cand, true);
  for (std::size_t c = 0; c < ncell; ++c)
    for (int i = 0; i < 3; ++i) E_bar[c][i] = 0.5 * (field.E[c][i] + E_cand[c][i]);
  curl(grid, E_bar, curlE);
  for (std::size_t c = 0; c < ncell; ++c)
    for (int i = 0; i < 3; ++i) field.B[c][i] -= dt * curlE[c][i];
  field.E = std::move(E_cand);
  field.B_half_prev = field.B;
  return iters;
}

void va_step(const Grid& grid, const MomentBasis& basis, double dt, const PhysicsParams& phys,
             std::vector<SpeciesState>& species, EmField& field) {
  std::vector<Vec3> E_new;
  apply_lorentz_cells(grid, basis, dt, phys, species, field.E, nullptr, nullptr, E_new, true);
  field.E = std::move(E_new);
}

void gauss_consistent_initial_E(const Grid& grid, const std::vector<double>& rhs,
                                std::vector<Vec3>& E) {
  using cplx = std::complex<double>;
  const int Nx = grid.n[0], Ny = grid.n[1];
  const std::size_t ncell = grid.ncell();
  const double two_pi = 2.0 * std::acos(-1.0);
  std::vector<cplx> wx(Nx), wy(Ny);
  for (int i = 0; i < Nx; ++i) wx[i] = std::polar(1.0, -two_pi * i / Nx);
  for (int i = 0; i < Ny; ++i) wy[i] = std::polar(1.0, -two_pi * i / Ny);

  E.assign(ncell, Vec3{0, 0, 0});
  std::vector<cplx> Ex(ncell, 0.0), Ey(ncell, 0.0);
  for (int my = 0; my < Ny; ++my) {
    for (int mx = 0; mx < Nx; ++mx) {
      // Difference-consistent wavenumbers: central differencing of mode m
      // multiplies by i*sin(2 pi m / N) / dx instead of i*k.  The Nyquist
      // mode (2m == N) lies exactly in the operator's null space; zero it by
      // index, because sin(pi) evaluates to ~1e-16 and dividing by its square
      // would amplify round-off in the mode amplitude into an O(1) field.
      const double ktx = 2 * mx == Nx ? 0.0 : std::sin(two_pi * mx / Nx) / grid.dx[0];
      const double kty =
          grid.sdim == 2 && 2 * my != Ny ? std::sin(two_pi * my / Ny) / grid.dx[1] : 0.0;
      const double k2 = ktx * ktx + kty * kty;
      if (k2 == 0.0) continue;
      cplx fhat(0.0, 0.0);
      for (int iy = 0; iy < Ny; ++iy)
        for (int ix = 0; ix < Nx; ++ix)
          fhat += rhs[grid.index(ix, iy)] *
                  (wx[(static_cast<long long>(mx) * ix) % Nx] *
                   wy[(static_cast<long long>(my) * iy) % Ny]);
      const cplx phi = fhat / k2;
      const cplx ex = cplx(0.0, -ktx) * phi;
      const cplx ey = cplx(0.0, -kty) * phi;
      for (int iy = 0; iy < Ny; ++iy)
        for (int ix = 0; ix < Nx; ++ix) {
          const cplx w = std::conj(wx[(static_cast<long long>(mx) * ix) % Nx] *
                                   wy[(static_cast<long long>(my) * iy) % Ny]);
          const std::size_t c = grid.index(ix, iy);
          Ex[c] += ex * w;
          Ey[c] += ey * w;
        }
    }
  }
  const double norm = 1.0 / static_cast<double>(ncell);
  for (std::size_t c = 0; c < ncell; ++c) {
    E[c][0] = Ex[c].real() * norm;
    E[c][1] = Ey[c].real() * norm;
  }
}

} // namespace hmvm
