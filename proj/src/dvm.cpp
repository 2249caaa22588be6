#include "hmvm/dvm.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace hmvm {

DvmGrid::DvmGrid(int nv_, double vmax_) : nv(nv_), vmax(vmax_) {
  if (nv < 2 || nv % 2 != 0)
    throw std::invalid_argument("DvmGrid: velocity node count must be even and >= 2");
  if (!(vmax > 0.0)) throw std::invalid_argument("DvmGrid: v_max must be positive");
  dv = 2.0 * vmax / nv;
}

DvmState dvm_sample(const Grid& grid, const DvmGrid& vgrid, const SpeciesParams& params,
                    const std::function<double(double, double, double)>& f0) {
  if (!f0) throw std::invalid_argument("dvm_sample: no closed-form distribution provided");
  DvmState state;
  state.vgrid = vgrid;
  state.params = params;
  const int nv = vgrid.nv;
  const std::size_t stride = static_cast<std::size_t>(nv) * nv;
  state.f.resize(grid.ncell() * stride);
  for (std::size_t c = 0; c < grid.ncell(); ++c) {
    const double x = grid.center(c, 0);
    double* fc = state.f.data() + c * stride;
    for (int j2 = 0; j2 < nv; ++j2)
      for (int j1 = 0; j1 < nv; ++j1) fc[j2 * nv + j1] = f0(x, vgrid.v(j1), vgrid.v(j2));
  }
  return state;
}

DvmMoments dvm_moments_cell(const DvmGrid& vgrid, const double* f_cell) {
  const int nv = vgrid.nv;
  double m0 = 0.0, m1 = 0.0, m2 = 0.0, e2 = 0.0;
  for (int j2 = 0; j2 < nv; ++j2) {
    const double v2 = vgrid.v(j2);
    for (int j1 = 0; j1 < nv; ++j1) {
      const double v1 = vgrid.v(j1);
      const double val = f_cell[j2 * nv + j1];
      m0 += val;
      m1 += v1 * val;
      m2 += v2 * val;
      e2 += (v1 * v1 + v2 * v2) * val;
    }
  }
  const double w = vgrid.dv * vgrid.dv;
  DvmMoments out;
  out.rho = m0 * w;
  if (out.rho > 0.0) {
    out.u = {m1 * w / out.rho, m2 * w / out.rho, 0.0};
    const double usq = out.u[0] * out.u[0] + out.u[1] * out.u[1];
    out.T = (e2 * w / out.rho - usq) / 2.0;
  }
  return out;
}

double dvm_raw_moment_cell(const DvmGrid& vgrid, const double* f_cell, int b1, int b2) {
  const int nv = vgrid.nv;
  double acc = 0.0;
  for (int j2 = 0; j2 < nv; ++j2) {
    const double p2 = std::pow(vgrid.v(j2), b2);
    for (int j1 = 0; j1 < nv; ++j1)
      acc += std::pow(vgrid.v(j1), b1) * p2 * f_cell[j2 * nv + j1];
  }
  return acc * vgrid.dv * vgrid.dv;
}

void dvm_transport_x(const Grid& grid, const DvmGrid& vgrid, double dt,
                     std::vector<double>& f) {
  const int nv = vgrid.nv;
  const std::size_t ncell = grid.ncell();
  const std::size_t stride = static_cast<std::size_t>(nv) * nv;
  const double dx = grid.dx[0];
  if (vgrid.vmax * std::abs(dt) / dx > 1.0 + 1e-12)
    throw std::invalid_argument("dvm_transport_x: spatial CFL number exceeds one");
#pragma omp parallel
  {
    std::vector<double> buf(ncell);
#pragma omp for schedule(static)
    for (long long node = 0; node < static_cast<long long>(stride); ++node) {
      const int j1 = static_cast<int>(node % nv);
      const double nu = vgrid.v(j1) * dt / dx;
      if (nu == 0.0) continue;
      for (std::size_t c = 0; c < ncell; ++c) buf[c] = f[c * stride + node];
      if (nu > 0.0) {
        for (std::size_t c = 0; c < ncell; ++c) {
          const std::size_t cm = c == 0 ? ncell - 1 : c - 1;
          f[c * stride + node] = buf[c] - nu * (buf[c] - buf[cm]);
        }
      } else {
        for (std::size_t c = 0; c < ncell; ++c) {
          const std::size_t cp = c + 1 == ncell ? 0 : c + 1;
          f[c * stride + node] = buf[c] - nu * (buf[cp] - buf[c]);
        }
      }
    }
  }
}

namespace {

/// In-place upwind sweep along one line of `n` values with spacing `step` and
/// zero-flux end faces; `nu` is the (signed) CFL number of the constant speed.
inline void upwind_line_zero_flux(double* p, int n, std::ptrdiff_t step, double nu) {
  if (nu == 0.0) return;
  if (nu > 0.0) {
    // Descending order keeps the reads of the lower neighbor at the old level.
    for (int j = n - 1; j >= 1; --j) {
      const double inflow = p[(j - 1) * step];
      // Top face carries no flux, so the last value only gains the inflow.
      p[j * step] += j == n - 1 ? nu * inflow : nu * (inflow - p[j * step]);
    }
    p[0] -= nu * p[0];
  } else {
    for (int j = 0; j + 1 < n; ++j) {
      const double inflow = p[(j + 1) * step];
      p[j * step] -= j == 0 ? nu * inflow : nu * (inflow - p[j * step]);
    }
    p[(n - 1) * step] += nu * p[(n - 1) * step];
  }
}

} // namespace

void dvm_accelerate(const Grid& grid, const DvmGrid& vgrid, double dt, double qm_over_kappa,
                    const std::vector<Vec3>& E, const std::vector<Vec3>& B,
                    std::vector<double>& f) {
  const int nv = vgrid.nv;
  const std::size_t ncell = grid.ncell();
  const std::size_t stride = static_cast<std::size_t>(nv) * nv;
  const double c = qm_over_kappa;

  double amax = 0.0;
  for (std::size_t i = 0; i < ncell; ++i) {
    const double a1 = std::abs(c) * (std::abs(E[i][0]) + vgrid.vmax * std::abs(B[i][2]));
    const double a2 = std::abs(c) * (std::abs(E[i][1]) + vgrid.vmax * std::abs(B[i][2]));
    amax = std::max({amax, a1, a2});
  }
  const int nsub = std::max(1, static_cast<int>(std::ceil(amax * std::abs(dt) / (0.5 * vgrid.dv))));
  const double dts = dt / nsub;

  for (int sub = 0; sub < nsub; ++sub) {
#pragma omp parallel for schedule(static)
    for (long long cc = 0; cc < static_cast<long long>(ncell); ++cc) {
      const std::size_t i = static_cast<std::size_t>(cc);
      double* fc = f.data() + i * stride;
      const double E1 = E[i][0], E2 = E[i][1], B3 = B[i][2];
      // Sweep along v1: the speed c (E1 + v2 B3) is constant within a row.
      for (int j2 = 0; j2 < nv; ++j2) {
        const double nu = c * (E1 + vgrid.v(j2) * B3) * dts / vgrid.dv;
        upwind_line_zero_flux(fc + static_cast<std::ptrdiff_t>(j2) * nv, nv, 1, nu);
      }
      // Sweep along v2: the speed c (E2 - v1 B3) is constant within a column.
      for (int j1 = 0; j1 < nv; ++j1) {
        const double nu = c * (E2 - vgrid.v(j1) * B3) * dts / vgrid.dv;
        upwind_line_zero_flux(fc + j1, nv, nv, nu);
      }
    }
  }
}

EnergyBreakdown dvm_audit(const Grid& grid, const DvmState& state, const EmField& field,
                          const PhysicsParams& phys) {
  const DvmGrid& vgrid = state.vgrid;
  const int nv = vgrid.nv;
  const std::size_t ncell = grid.ncell();
  const std::size_t stride = static_cast<std::size_t>(nv) * nv;
  const double dV = grid.cell_volume();
  const double w = vgrid.dv * vgrid.dv;
  const double kappa = phys.frequency_ratio;

  EnergyBreakdown e;
  double mass = 0.0, kin = 0.0;
  std::vector<double> charge(ncell);
  for (std::size_t i = 0; i < ncell; ++i) {
    const double* fc = state.f.data() + i * stride;
    double m0 = 0.0, e2 = 0.0;
    for (int j2 = 0; j2 < nv; ++j2) {
      const double v2 = vgrid.v(j2);
      for (int j1 = 0; j1 < nv; ++j1) {
        const double v1 = vgrid.v(j1);
        m0 += fc[j2 * nv + j1];
        e2 += (v1 * v1 + v2 * v2) * fc[j2 * nv + j1];
      }
    }
    mass += m0 * w;
    kin += 0.5 * state.params.mass * e2 * w;
    charge[i] = state.params.charge * m0 * w;
  }
  e.mass_species = {mass * dV};
  e.kinetic_species = {kin * dV};
  e.mass_total = e.mass_species[0];
  e.kinetic_total = e.kinetic_species[0];

  const double fw = 0.5 / (kappa * kappa);
  for (std::size_t i = 0; i < ncell; ++i) {
    e.electric_1 += fw * field.E[i][0] * field.E[i][0] * dV;
    e.electric_2 += fw * field.E[i][1] * field.E[i][1] * dV;
    e.electric += fw *
                  (field.E[i][0] * field.E[i][0] + field.E[i][1] * field.E[i][1] +
                   field.E[i][2] * field.E[i][2]) *
                  dV;
    e.magnetic_exact += fw *
                        (field.B[i][0] * field.B[i][0] + field.B[i][1] * field.B[i][1] +
                         field.B[i][2] * field.B[i][2]) *
                        dV;
  }
  e.magnetic_product = e.magnetic_exact;
  e.total_exact = e.kinetic_total + e.electric + e.magnetic_exact;
  e.total_product = e.total_exact;

  double mean = 0.0;
  for (double q : charge) mean += q;
  mean /= static_cast<double>(ncell);
  const std::vector<double> div = divergence(grid, field.E);
  for (std::size_t i = 0; i < ncell; ++i)
    e.gauss_residual = std::max(e.gauss_residual, std::abs(div[i] - kappa * (charge[i] - mean)));
  return e;
}

DvmResult dvm_run(const ScenarioSetup& setup, const DvmRunParams& params) {
  if (setup.grid.sdim != 1)
    throw std::invalid_argument("dvm_run: requires a one-dimensional spatial grid");
  if (setup.species.size() != 1)
    throw std::invalid_argument("dvm_run: requires exactly one species");
  if (!setup.f0)
    throw std::invalid_argument("dvm_run: scenario has no closed-form distribution");

  const Grid& grid = setup.grid;
  const std::size_t ncell = grid.ncell();
  const DvmGrid vgrid(params.nv, params.vmax);
  const double kappa = setup.phys.frequency_ratio;
  const SpeciesParams& sp = setup.species[0].params;
  const double qm = sp.charge / sp.mass / kappa;

  DvmResult result;
  result.state = dvm_sample(grid, vgrid, sp, setup.f0);
  result.field = setup.field;
  std::vector<double>& f = result.state.f;
  const std::size_t stride = static_cast<std::size_t>(vgrid.nv) * vgrid.nv;

  const double speed = std::max(params.vmax, 1.0); // particle and light speeds
  double dt = params.cfl * grid.dx[0] / speed;
  const long long nsteps = std::max<long long>(1, static_cast<long long>(std::ceil(params.t_end / dt)));
  dt = params.t_end / static_cast<double>(nsteps);
  result.dt = dt;
  const long long diag_stride =
      params.diag_every > 0.0 ? std::max<long long>(1, std::llround(params.diag_every / dt)) : 1;

  result.history.push_back(dvm_audit(grid, result.state, result.field, setup.phys));

  std::vector<Vec3> curl_buf(ncell), B_half(ncell), curlB(ncell), E_new(ncell), E_bar(ncell);
  const std::vector<double> qm_vec = {qm};
  for (long long step = 0; step < nsteps; ++step) {
    dvm_transport_x(grid, vgrid, 0.5 * dt, f);

    curl(grid, result.field.E, curl_buf);
    for (std::size_t i = 0; i < ncell; ++i)
      for (int d = 0; d < 3; ++d) B_half[i][d] = result.field.B[i][d] - 0.5 * dt * curl_buf[i][d];
    curl(grid, B_half, curlB);
#pragma omp parallel
    {
      std::vector<double> qrho(1);
      std::vector<Vec3> u_star(1), u_new(1);
#pragma omp for schedule(static)
      for (long long cc = 0; cc < static_cast<long long>(ncell); ++cc) {
        const std::size_t i = static_cast<std::size_t>(cc);
        const DvmMoments mom = dvm_moments_cell(vgrid, f.data() + i * stride);
        qrho[0] = sp.charge * mom.rho;
        u_star[0] = mom.u;
        Vec3 E_rhs = result.field.E[i];
        for (int d = 0; d < 3; ++d) E_rhs[d] += dt * curlB[i][d];
        lorentz_cell_solve(2, dt, kappa, E_rhs, result.field.E[i], B_half[i], qrho, qm_vec,
                           u_star, E_new[i], u_new);
      }
    }
    for (std::size_t i = 0; i < ncell; ++i)
      for (int d = 0; d < 3; ++d) E_bar[i][d] = 0.5 * (result.field.E[i][d] + E_new[i][d]);

    dvm_accelerate(grid, vgrid, dt, qm, E_bar, B_half, f);

    result.field.E = E_new;
    curl(grid, result.field.E, curl_buf);
    for (std::size_t i = 0; i < ncell; ++i)
      for (int d = 0; d < 3; ++d) result.field.B[i][d] = B_half[i][d] - 0.5 * dt * curl_buf[i][d];
    result.field.B_half_prev = B_half;

    dvm_transport_x(grid, vgrid, 0.5 * dt, f);

    if ((step + 1) % diag_stride == 0 || step + 1 == nsteps) {
      EnergyBreakdown e = dvm_audit(grid, result.state, result.field, setup.phys);
      e.step = step + 1;
      e.time = static_cast<double>(step + 1) * dt;
      result.history.push_back(e);
    }
  }
  result.steps = nsteps;
  return result;
}

} // namespace hmvm
