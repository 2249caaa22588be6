#include "hmvm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hmvm/hermite.hpp"

namespace hmvm {

EnergyBreakdown audit(const Grid& grid, const MomentBasis& basis,
                      const std::vector<SpeciesState>& species, const EmField& field,
                      const PhysicsParams& phys, double dt, bool staggered_B) {
  const int D = basis.dim();
  const std::size_t ncell = grid.ncell();
  const double dV = grid.cell_volume();
  const double kappa = phys.frequency_ratio;
  const double field_w = 0.5 / (kappa * kappa);

  EnergyBreakdown e;
  for (const SpeciesState& sp : species) {
    double mass = 0.0, kin = 0.0;
    for (const CellMomentState& cell : sp.cells) {
      const double rho = cell.rho();
      double u2 = 0.0;
      for (int d = 0; d < D; ++d) u2 += cell.u[d] * cell.u[d];
      mass += rho;
      kin += rho * (u2 + D * cell.T);
    }
    e.mass_species.push_back(mass * dV);
    e.kinetic_species.push_back(0.5 * sp.params.mass * kin * dV);
    e.mass_total += e.mass_species.back();
    e.kinetic_total += e.kinetic_species.back();
  }

  for (std::size_t c = 0; c < ncell; ++c) {
    const Vec3& E = field.E[c];
    e.electric_1 += field_w * E[0] * E[0] * dV;
    e.electric_2 += field_w * E[1] * E[1] * dV;
    e.electric += field_w * (E[0] * E[0] + E[1] * E[1] + E[2] * E[2]) * dV;
    const Vec3& B = field.B[c];
    e.magnetic_exact += field_w * (B[0] * B[0] + B[1] * B[1] + B[2] * B[2]) * dV;
  }
  if (staggered_B) {
    std::vector<Vec3> curlE;
    curl(grid, field.E, curlE);
    double prod = 0.0;
    for (std::size_t c = 0; c < ncell; ++c)
      for (int i = 0; i < 3; ++i) {
        const double b_next = field.B[c][i] - 0.5 * dt * curlE[c][i];
        prod += field.B_half_prev[c][i] * b_next;
      }
    e.magnetic_product = field_w * prod * dV;
  } else {
    e.magnetic_product = e.magnetic_exact;
  }
  e.total_exact = e.kinetic_total + e.electric + e.magnetic_exact;
  e.total_product = e.kinetic_total + e.electric + e.magnetic_product;

  // Gauss-law residual against the mean-subtracted charge density.
  std::vector<double> rhs(ncell, 0.0);
  for (const SpeciesState& sp : species)
    for (std::size_t c = 0; c < ncell; ++c)
      rhs[c] += kappa * sp.params.charge * sp.cells[c].rho();
  double mean = 0.0;
  for (double r : rhs) mean += r;
  mean /= static_cast<double>(ncell);
  const std::vector<double> div = divergence(grid, field.E);
  double res = 0.0;
  for (std::size_t c = 0; c < ncell; ++c) res = std::max(res, std::abs(div[c] - (rhs[c] - mean)));
  e.gauss_residual = res;
  return e;
}

double relative_variation(const std::vector<double>& series) {
  if (series.empty()) return 0.0;
  const double x0 = series.front();
  const double scale = x0 == 0.0 ? 1.0 : std::abs(x0);
  double v = 0.0;
  for (double x : series) v = std::max(v, std::abs(x - x0) / scale);
  return v;
}

DampingFit damping_fit(const std::vector<double>& t, const std::vector<double>& energy,
                       double t0, double t1) {
  DampingFit fit;
  if (t.size() != energy.size() || t.size() < 5) return fit;
  std::vector<double> tp, yp;
  bool first_skipped = false;
  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(t.size());
  for (std::ptrdiff_t i = 2; i + 2 < np; ++i) {
    const double v = energy[i];
    if (!(v > energy[i - 1] && v > energy[i - 2] && v >= energy[i + 1] && v >= energy[i + 2]))
      continue;
    if (!first_skipped) { // the initial transient peak is not part of the decay
      first_skipped = true;
      continue;
    }
    if (t[i] < t0 || t[i] > t1 || v <= 0.0) continue;
    tp.push_back(t[i]);
    yp.push_back(0.5 * std::log(2.0 * v));
  }
  fit.n_peaks = static_cast<int>(tp.size());
  if (fit.n_peaks < 3) return fit;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < tp.size(); ++i) {
    st += tp[i];
    sy += yp[i];
    stt += tp[i] * tp[i];
    sty += tp[i] * yp[i];
  }
  const double m = static_cast<double>(tp.size());
  const double den = m * stt - st * st;
  if (den == 0.0) return fit;
  fit.slope = (m * sty - st * sy) / den;
  fit.ok = true;
  return fit;
}

namespace {

/// Piecewise-linear interpolation of a sampled series, clamped at the ends.
double interp_series(const std::vector<double>& t, const std::vector<double>& y, double x) {
  if (t.empty()) return 0.0;
  if (x <= t.front()) return y.front();
  if (x >= t.back()) return y.back();
  const auto it = std::upper_bound(t.begin(), t.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - t.begin());
  const std::size_t lo = hi - 1;
  const double span = t[hi] - t[lo];
  if (span <= 0.0) return y[lo];
  const double w = (x - t[lo]) / span;
  return (1.0 - w) * y[lo] + w * y[hi];
}

} // namespace

double log_series_distance(const std::vector<double>& ta, const std::vector<double>& a,
                           const std::vector<double>& tb, const std::vector<double>& b,
                           double t0, double t1, int nsamp, double floor_value) {
  if (nsamp < 2 || ta.size() != a.size() || tb.size() != b.size() || ta.empty() || tb.empty())
    throw std::invalid_argument("log_series_distance: bad sample arrays");
  double num = 0.0, den = 0.0;
  for (int i = 0; i < nsamp; ++i) {
    const double t = t0 + (t1 - t0) * i / (nsamp - 1);
    const double la = std::log10(std::max(interp_series(ta, a, t), floor_value));
    const double lb = std::log10(std::max(interp_series(tb, b, t), floor_value));
    num += (la - lb) * (la - lb);
    den += lb * lb;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

MarginalSlice marginal(const Grid& grid, const MomentBasis& basis,
                       const std::vector<CellMomentState>& cells, int axis, int nv,
                       double v_min, double v_max) {
  if (axis < 0 || axis >= basis.dim()) throw std::invalid_argument("marginal: bad axis");
  const int M = basis.order();
  MarginalSlice s;
  s.axis = axis;
  s.v.resize(nv);
  for (int k = 0; k < nv; ++k)
    s.v[k] = v_min + (v_max - v_min) * (k + 0.5) / nv;
  s.value.assign(grid.ncell() * nv, 0.0);

  const MultiIndexTable& tab = basis.table();
  std::vector<int> line(M + 1); // flat indices of m * e_axis
  {
    MultiIndex a{0, 0, 0};
    for (int m = 0; m <= M; ++m) {
      a[axis] = m;
      line[m] = tab.idx(a);
    }
  }
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::acos(-1.0));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const CellMomentState& cell = cells[c];
    const double sT = std::sqrt(cell.T);
    for (int k = 0; k < nv; ++k) {
      const double xi = (s.v[k] - cell.u[axis]) / sT;
      const double env = inv_sqrt_2pi * std::exp(-0.5 * xi * xi);
      // sum_m coef[m e_axis] T^{-(m+1)/2} He_m(xi) * envelope
      double hkm1 = 0.0, hk = 1.0; // He_{-1}, He_0
      double tpow = 1.0 / sT;
      double acc = 0.0;
      for (int m = 0; m <= M; ++m) {
        acc += cell.coef[line[m]] * tpow * hk;
        const double hkp1 = xi * hk - m * hkm1;
        hkm1 = hk;
        hk = hkp1;
        tpow /= sT;
      }
      s.value[c * nv + k] = acc * env;
    }
  }
  return s;
}

void CsvWriter::open(const std::string& path, const std::vector<std::string>& species_names) {
  out_.open(path);
  if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
  out_ << "step,t,mass";
  for (const std::string& name : species_names) out_ << ",E_K_" << name;
  out_ << ",E_E,E_E1,E_E2,E_B,E_total_modified,E_total_exact,V_mass,V_energy,gauss_residual\n";
  out_.precision(17);
}

void CsvWriter::row(const EnergyBreakdown& e, double v_mass, double v_energy) {
  out_ << e.step << ',' << e.time << ',' << e.mass_total;
  for (double k : e.kinetic_species) out_ << ',' << k;
  out_ << ',' << e.electric << ',' << e.electric_1 << ',' << e.electric_2 << ','
       << e.magnetic_exact << ',' << e.total_product << ',' << e.total_exact << ','
       << v_mass << ',' << v_energy << ',' << e.gauss_residual << '\n';
}

} // namespace hmvm
