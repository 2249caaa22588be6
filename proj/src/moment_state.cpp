#include "hmvm/moment_state.hpp"

#include <cmath>
#include <stdexcept>

#include "hmvm/errors.hpp"

namespace hmvm {

CellMomentState from_maxwellian(const MomentBasis& basis, double rho,
                                const std::array<double, 3>& u, double T) {
  if (!(rho > 0.0)) throw std::invalid_argument("from_maxwellian: rho must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("from_maxwellian: T must be positive");
  CellMomentState cell;
  cell.u = u;
  cell.T = T;
  cell.coef.assign(basis.size(), 0.0);
  cell.coef[0] = rho;
  return cell;
}

CellMomentState project_to_basis(const MomentBasis& basis,
                                 const std::function<double(const std::array<double, 3>&)>& f,
                                 const std::array<double, 3>& u, double T,
                                 int quad_order) {
  if (!(T > 0.0)) throw std::invalid_argument("project_to_basis: T must be positive");
  const int D = basis.dim();
  const int M = basis.order();
  const auto& tab = basis.table();

  GaussHermiteRule rule;
  if (quad_order <= 0) {
    rule = basis.hermite().quadrature();
  } else {
    rule = gauss_hermite(quad_order);
  }
  const int Q = static_cast<int>(rule.nodes.size());
  // absorb the weight function: int g(x) dx = sum what_i g(x_i)
  std::vector<double> what(Q);
  for (int i = 0; i < Q; ++i) what[i] = rule.weights[i] * std::exp(0.5 * rule.nodes[i] * rule.nodes[i]);
  // He_k at each node
  std::vector<double> he(static_cast<size_t>(Q) * (M + 1));
  for (int i = 0; i < Q; ++i)
    for (int k = 0; k <= M; ++k) he[static_cast<size_t>(i) * (M + 1) + k] = hermite_he(k, rule.nodes[i]);

  CellMomentState cell;
  cell.u = u;
  cell.T = T;
  cell.coef.assign(basis.size(), 0.0);
  const double sT = std::sqrt(T);

  auto accumulate = [&](const std::array<int, 3>& node) {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    double w = std::pow(sT, D); // dv = T^{D/2} dxi
    for (int d = 0; d < D; ++d) {
      v[d] = u[d] + sT * rule.nodes[node[d]];
      w *= what[node[d]];
    }
    const double fv = f(v) * w;
    if (fv == 0.0) return;
    for (int a = 0; a < basis.size(); ++a) {
      const auto& alpha = tab[a];
      double prod = fv;
      for (int d = 0; d < D; ++d) prod *= he[static_cast<size_t>(node[d]) * (M + 1) + alpha[d]];
      cell.coef[a] += prod;
    }
  };

  std::array<int, 3> node{0, 0, 0};
  if (D == 2) {
    for (node[0] = 0; node[0] < Q; ++node[0])
      for (node[1] = 0; node[1] < Q; ++node[1]) accumulate(node);
  } else {
    for (node[0] = 0; node[0] < Q; ++node[0])
      for (node[1] = 0; node[1] < Q; ++node[1])
        for (node[2] = 0; node[2] < Q; ++node[2]) accumulate(node);
  }

  // scale by T^{|alpha|/2} / alpha!
  for (int a = 0; a < basis.size(); ++a) {
    const auto& alpha = tab[a];
    double fac = std::pow(sT, tab.total_degree(a));
    for (int d = 0; d < D; ++d)
      for (int j = 2; j <= alpha[d]; ++j) fac /= j;
    cell.coef[a] *= fac;
  }
  return cell;
}

MacroMoments macro_from_coeffs(const MomentBasis& basis, const CellMomentState& cell) {
  const int D = basis.dim();
  const auto& tab = basis.table();
  MacroMoments m;
  const double f0 = cell.coef[0];
  m.rho = f0;

  double m2 = 0.0; // int |v|^2 f dv
  double u_b2 = 0.0;
  double trace = 0.0;
  for (int d = 0; d < D; ++d) {
    MultiIndex ed{0, 0, 0};
    ed[d] = 1;
    const double f_ed = cell.coef[tab.idx(ed)];
    MultiIndex e2d{0, 0, 0};
    e2d[d] = 2;
    const int i2 = tab.idx(e2d); // absent when M = 1 (Euler-limit closure)
    const double f_2ed = i2 >= 0 ? cell.coef[i2] : 0.0;
    m.u[d] = cell.u[d] + f_ed / f0;
    u_b2 += cell.u[d] * cell.u[d];
    trace += f_2ed;
    m2 += 2.0 * cell.u[d] * f_ed + 2.0 * f_2ed;
    m.center_violation[d] = std::abs(f_ed) / std::abs(f0);
  }
  m2 += (u_b2 + D * cell.T) * f0;

  double u2 = 0.0;
  for (int d = 0; d < D; ++d) u2 += m.u[d] * m.u[d];
  m.T = (m2 - m.rho * u2) / (D * m.rho);
  m.scale_violation = std::abs(trace) / std::abs(f0 * cell.T);
  return m;
}

namespace {

// Applies g_j = sum_m w[m] f_{j - step*m} along every line of dimension d,
// in place, descending j (w[0] = 1 keeps the diagonal).
void apply_line_map(const MultiIndexTable& tab, std::vector<double>& coef, int d,
                    const std::vector<double>& w, int step) {
  for (const auto& line : tab.lines(d)) {
    const int n = static_cast<int>(line.size());
    for (int j = n - 1; j >= 1; --j) {
      double acc = coef[line[j]];
      const int mmax = j / step;
      for (int m = 1; m <= mmax; ++m) {
        const double wm = w[m];
        if (wm != 0.0) acc += wm * coef[line[j - step * m]];
      }
      coef[line[j]] = acc;
    }
  }
}

} // namespace

void recenters(const MomentBasis& basis, CellMomentState& cell,
               const std::array<double, 3>& u_new, double T_new) {
  if (!(T_new > 0.0)) throw std::invalid_argument("recenters: T_new must be positive");
  const int D = basis.dim();
  const int M = basis.order();
  const auto& tab = basis.table();

  std::vector<double> w(M + 1);
  // scale connection T -> T_new: weights ((T - T_new)/2)^m / m! on even offsets
  const double s = 0.5 * (cell.T - T_new);
  if (s != 0.0) {
    w[0] = 1.0;
    for (int m = 1; 2 * m <= M; ++m) w[m] = w[m - 1] * s / m;
    for (int d = 0; d < D; ++d) apply_line_map(tab, cell.coef, d, w, 2);
  }
  // center translation u -> u_new per dimension: weights (u_d - u_new_d)^m / m!
  for (int d = 0; d < D; ++d) {
    const double delta = cell.u[d] - u_new[d];
    if (delta == 0.0) continue;
    w[0] = 1.0;
    for (int m = 1; m <= M; ++m) w[m] = w[m - 1] * delta / m;
    apply_line_map(tab, cell.coef, d, w, 1);
  }
  cell.u = u_new;
  cell.T = T_new;
}

MacroMoments renormalize(const MomentBasis& basis, CellMomentState& cell,
                         std::size_t cell_index) {
  MacroMoments m = macro_from_coeffs(basis, cell);
  if (!(m.rho > 0.0) || !(m.T > 0.0) || !std::isfinite(m.rho) || !std::isfinite(m.T))
    throw PositivityError("state lost admissibility (rho or T nonpositive)", cell_index,
                          m.rho, m.T);
  recenters(basis, cell, m.u, m.T);
  // enforce the native constraints exactly (residuals are round-off level)
  const auto& tab = basis.table();
  const int D = basis.dim();
  double trace = 0.0;
  for (int d = 0; d < D; ++d) {
    MultiIndex ed{0, 0, 0};
    ed[d] = 1;
    cell.coef[tab.idx(ed)] = 0.0;
    MultiIndex e2d{0, 0, 0};
    e2d[d] = 2;
    const int i2 = tab.idx(e2d);
    if (i2 >= 0) trace += cell.coef[i2];
  }
  if (basis.order() >= 2) {
    for (int d = 0; d < D; ++d) {
      MultiIndex e2d{0, 0, 0};
      e2d[d] = 2;
      cell.coef[tab.idx(e2d)] -= trace / D;
    }
  }
  return m;
}

double eval_distribution(const MomentBasis& basis, const CellMomentState& cell,
                         const std::array<double, 3>& v) {
  const int D = basis.dim();
  const double sT = std::sqrt(cell.T);
  double xi[3] = {0.0, 0.0, 0.0};
  for (int d = 0; d < D; ++d) xi[d] = (v[d] - cell.u[d]) / sT;
  double tot = 0.0;
  const auto& tab = basis.table();
  for (int a = 0; a < basis.size(); ++a)
    if (cell.coef[a] != 0.0) tot += cell.coef[a] * basis_eval(tab[a], D, cell.T, xi);
  return tot;
}

double raw_moment(const MomentBasis& basis, const CellMomentState& cell,
                  const MultiIndex& beta) {
  // Multiplying the expansion by v_j maps coefficients by
  //   (v_j f)_a = T f_{a-e_j} + u_j f_a + (a_j + 1) f_{a+e_j},
  // exactly, on a workspace extended to order M + |beta|; the raw moment is
  // slot 0 after applying the map beta_j times per dimension.
  const int D = basis.dim();
  const int Mx = basis.order() + beta[0] + beta[1] + beta[2];
  const int n1 = Mx + 1;
  const int n2 = (D == 3) ? n1 : 1;
  std::vector<double> a(static_cast<size_t>(n1) * n1 * n2, 0.0);
  std::vector<double> b(a.size(), 0.0);
  auto slot = [&](int i, int j, int k) -> size_t {
    return (static_cast<size_t>(i) * n1 + j) * n2 + k;
  };
  const auto& tab = basis.table();
  for (int i = 0; i < basis.size(); ++i) {
    const auto& al = tab[i];
    a[slot(al[0], al[1], al[2])] = cell.coef[i];
  }
  for (int j = 0; j < D; ++j) {
    for (int rep = 0; rep < beta[j]; ++rep) {
      std::fill(b.begin(), b.end(), 0.0);
      for (int i0 = 0; i0 <= Mx; ++i0)
        for (int i1 = 0; i0 + i1 <= Mx; ++i1) {
          const int k_hi = (D == 3) ? Mx - i0 - i1 : 0;
          for (int i2 = 0; i2 <= k_hi; ++i2) {
            const double val = a[slot(i0, i1, i2)];
            if (val == 0.0) continue;
            int aj[3] = {i0, i1, i2};
            int up[3] = {i0, i1, i2};
            up[j] += 1;
            if (up[0] + up[1] + up[2] <= Mx) b[slot(up[0], up[1], up[2])] += cell.T * val;
            b[slot(i0, i1, i2)] += cell.u[j] * val;
            if (aj[j] > 0) {
              int dn[3] = {i0, i1, i2};
              dn[j] -= 1;
              b[slot(dn[0], dn[1], dn[2])] += aj[j] * val;
            }
          }
        }
      std::swap(a, b);
    }
  }
  return a[slot(0, 0, 0)];
}

DerivedMoments derived_moments(const MomentBasis& basis, const CellMomentState& cell) {
  const int D = basis.dim();
  const auto& tab = basis.table();
  DerivedMoments out;
  const double rho = cell.coef[0];
  const double T = cell.T;
  auto at = [&](const MultiIndex& a) {
    const int id = tab.idx(a);
    return id >= 0 ? cell.coef[id] : 0.0;
  };
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      MultiIndex a{0, 0, 0};
      a[i] += 1;
      a[j] += 1;
      out.pressure[i][j] = (i == j ? rho * T : 0.0) + (i == j ? 2.0 : 1.0) * at(a);
    }
    MultiIndex a3{0, 0, 0};
    a3[i] = 3;
    double q = 2.0 * at(a3);
    for (int d = 0; d < D; ++d) {
      MultiIndex a{0, 0, 0};
      a[d] = 2;
      a[i] += 1;
      q += at(a);
    }
    out.heat_flux[i] = q;
  }
  return out;
}

} // namespace hmvm
