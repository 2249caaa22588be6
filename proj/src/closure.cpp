#include "hmvm/closure.hpp"

#include <cmath>
#include <stdexcept>

namespace hmvm {

namespace {

/// Gradient of the distribution in a frozen basis: combines the coefficient
/// gradient with the contribution from the spatially varying expansion center
/// and scale.  Valid for |alpha| <= M; entries at |alpha| = 1 of `dcoef` are
/// taken as zero (center constraint) and slot 0 as `drho`.
void frozen_gradient(const MomentBasis& basis, const CellMomentState& cell,
                     const TupleGradient& g, std::vector<double>& gamma) {
  const MultiIndexTable& tab = basis.table();
  const int D = basis.dim();
  const int n = tab.size();
  gamma.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double val = 0.0;
    const int deg = tab.total_degree(i);
    if (deg == 0)
      val = g.drho;
    else if (deg >= 2)
      val = g.dcoef[i];
    for (int d = 0; d < D; ++d) {
      const int dn = tab.down(i, d);
      if (dn >= 0) {
        val += g.du[d] * cell.coef[dn];
        const int dn2 = tab.down(dn, d);
        if (dn2 >= 0) val += 0.5 * g.dT * cell.coef[dn2];
      }
    }
    gamma[i] = val;
  }
}

/// Basis-motion part of the frozen gradient at the out-of-range index
/// alpha + e_j (|alpha| = M), which the coefficient gradient cannot supply.
double top_gradient(const MomentBasis& basis, const std::vector<double>& coef,
                    const std::array<double, 3>& du, double dT, int i, int j) {
  const MultiIndexTable& tab = basis.table();
  const int D = basis.dim();
  // d = j terms: alpha - e_j + e_j = alpha and alpha - 2 e_j + e_j = alpha - e_j
  // are valid regardless of alpha_j, so they cannot go through shift() (which
  // requires stepping down in d first).
  double val = du[j] * coef[i];
  const int dnj = tab.down(i, j);
  if (dnj >= 0) val += 0.5 * dT * coef[dnj];
  for (int d = 0; d < D; ++d) {
    if (d == j) continue;
    const int s1 = tab.shift(i, d, j); // alpha - e_d + e_j
    if (s1 >= 0) val += du[d] * coef[s1];
    const int dn = tab.down(i, d);
    if (dn >= 0) {
      const int s2 = tab.shift(dn, d, j); // alpha - 2 e_d + e_j
      if (s2 >= 0) val += 0.5 * dT * coef[s2];
    }
  }
  return val;
}

} // namespace

TupleRate convective_rhs(const MomentBasis& basis, const CellMomentState& cell,
                         const std::vector<std::pair<int, const TupleGradient*>>& grads) {
  const MultiIndexTable& tab = basis.table();
  const int D = basis.dim();
  const int M = basis.order();
  const int n = tab.size();
  const double rho = cell.rho();
  if (rho <= 0.0) throw std::invalid_argument("convective_rhs: nonpositive density");
  if (M < 2) throw std::invalid_argument("convective_rhs: requires order >= 2");

  TupleRate rate;
  rate.coef.assign(n, 0.0);
  std::vector<double> gamma, V(n);
  for (const auto& [j, gptr] : grads) {
    const TupleGradient& g = *gptr;
    frozen_gradient(basis, cell, g, gamma);
    for (int i = 0; i < n; ++i) {
      double v = cell.u[j] * gamma[i];
      const int dn = tab.down(i, j);
      if (dn >= 0) v += cell.T * gamma[dn];
      const MultiIndex& a = tab[i];
      const int up = tab.up(i, j);
      if (up >= 0)
        v += (a[j] + 1) * gamma[up];
      else if (tab.total_degree(i) == M)
        v += (a[j] + 1) * top_gradient(basis, cell.coef, g.du, g.dT, i, j);
      V[i] = v;
    }
    // Convert the raw coefficient rates into rates of (rho, u, T, f).
    rate.rho += V[0];
    std::array<double, 3> vu{0.0, 0.0, 0.0};
    double vT = 0.0;
    for (int d = 0; d < D; ++d) {
      const int e = tab.up(0, d);
      vu[d] = V[e] / rho;
      rate.u[d] += vu[d];
      vT += V[tab.up(e, d)];
    }
    vT *= 2.0 / (D * rho);
    rate.T += vT;
    for (int i = 0; i < n; ++i) {
      if (tab.total_degree(i) < 2) continue;
      double v = V[i];
      for (int d = 0; d < D; ++d) {
        const int dn = tab.down(i, d);
        if (dn >= 0) {
          v -= vu[d] * cell.coef[dn];
          const int dn2 = tab.down(dn, d);
          if (dn2 >= 0) v -= 0.5 * vT * cell.coef[dn2];
        }
      }
      rate.coef[i] += v;
    }
  }
  return rate;
}

void regularization_correction(const MomentBasis& basis, const std::vector<double>& coef,
                               int j, const std::array<double, 3>& du, double dT,
                               std::vector<double>& out) {
  const MultiIndexTable& tab = basis.table();
  const int M = basis.order();
  out.assign(tab.size(), 0.0);
  for (int i = tab.grade_begin(M); i < tab.grade_end(M); ++i) {
    const MultiIndex& a = tab[i];
    out[i] = (a[j] + 1) * top_gradient(basis, coef, du, dT, i, j);
  }
}

void flux_coefficients(const MomentBasis& basis, const std::vector<double>& coef,
                       double u_d, double T, int d, std::vector<double>& out) {
  const MultiIndexTable& tab = basis.table();
  const int n = tab.size();
  out.resize(n);
  for (int i = 0; i < n; ++i) {
    double v = u_d * coef[i];
    const int dn = tab.down(i, d);
    if (dn >= 0) v += T * coef[dn];
    const int up = tab.up(i, d);
    if (up >= 0) v += (tab[i][d] + 1) * coef[up];
    out[i] = v;
  }
}

std::array<double, 2> char_speeds(const MomentBasis& basis, double u_d, double T) {
  const double c = basis.hermite().speed_factor() * std::sqrt(T);
  return {u_d - c, u_d + c};
}

void magnetic_rotation_apply(const MomentBasis& basis, const std::vector<double>& coef,
                             const std::array<double, 3>& B, double scale,
                             std::vector<double>& out) {
  const MultiIndexTable& tab = basis.table();
  const int D = basis.dim();
  const int n = tab.size();
  out.resize(n, 0.0);
  // c[d][l] = sum_m eps_{dlm} B_m, the antisymmetric rotation matrix.
  const double c[3][3] = {{0, B[2], -B[1]}, {-B[2], 0, B[0]}, {B[1], -B[0], 0}};
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    const MultiIndex& a = tab[i];
    for (int d = 0; d < D; ++d)
      for (int l = 0; l < D; ++l) {
        if (l == d || c[d][l] == 0.0) continue;
        const int s = tab.shift(i, d, l); // alpha - e_d + e_l
        if (s >= 0) acc += c[d][l] * (a[l] + 1) * coef[s];
      }
    out[i] += scale * acc;
  }
}

} // namespace hmvm
