#include "hmvm/scenarios.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace hmvm {

namespace {

const double kPi = std::acos(-1.0);

double maxwellian_2v(double rho, double u1, double u2, double T, double v1, double v2) {
  const double w1 = v1 - u1, w2 = v2 - u2;
  return rho / (2.0 * kPi * T) * std::exp(-0.5 * (w1 * w1 + w2 * w2) / T);
}

} // namespace

double mixture_temperature(const std::vector<double>& w,
                           const std::vector<std::array<double, 3>>& u,
                           const std::vector<double>& T, int D) {
  std::array<double, 3> ub{0.0, 0.0, 0.0};
  for (std::size_t s = 0; s < w.size(); ++s)
    for (int d = 0; d < D; ++d) ub[d] += w[s] * u[s][d];
  double out = 0.0;
  for (std::size_t s = 0; s < w.size(); ++s) {
    double du2 = 0.0;
    for (int d = 0; d < D; ++d) du2 += (u[s][d] - ub[d]) * (u[s][d] - ub[d]);
    out += w[s] * (T[s] + du2 / D);
  }
  return out;
}

CellMomentState mixture_state(const MomentBasis& basis, const std::vector<double>& rho,
                              const std::vector<std::array<double, 3>>& u,
                              const std::vector<double>& T) {
  const int D = basis.dim();
  double mass = 0.0;
  for (double r : rho) mass += r;
  if (!(mass > 0.0)) throw std::invalid_argument("mixture_state: nonpositive total density");
  std::vector<double> w(rho.size());
  for (std::size_t s = 0; s < rho.size(); ++s) w[s] = rho[s] / mass;
  std::array<double, 3> ub{0.0, 0.0, 0.0};
  for (std::size_t s = 0; s < w.size(); ++s)
    for (int d = 0; d < D; ++d) ub[d] += w[s] * u[s][d];
  const double Tb = mixture_temperature(w, u, T, D);

  CellMomentState out = from_maxwellian(basis, rho[0], u[0], T[0]);
  recenters(basis, out, ub, Tb);
  for (std::size_t s = 1; s < rho.size(); ++s) {
    CellMomentState part = from_maxwellian(basis, rho[s], u[s], T[s]);
    recenters(basis, part, ub, Tb);
    for (int i = 0; i < basis.size(); ++i) out.coef[i] += part.coef[i];
  }
  return out;
}

std::string canonical_scenario_name(const std::string& name) {
  std::string s;
  for (char c : name)
    s += (c == '-') ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "landau") return "landau";
  if (s == "two_stream" || s == "twostream") return "two_stream";
  if (s == "weibel") return "weibel";
  if (s == "orszag_tang" || s == "ot" || s == "orszagtang") return "orszag_tang";
  if (s == "bump") return "bump";
  return "";
}

namespace {

ScenarioSetup make_landau(const ScenarioConfig& cfg) {
  ScenarioSetup s;
  s.name = "landau";
  const int N = cfg.Nx > 0 ? cfg.Nx : 256;
  const int M = cfg.M > 0 ? cfg.M : 20;
  const double k = cfg.k > 0.0 ? cfg.k : 0.3;
  const double A = cfg.A >= 0.0 ? cfg.A : 1e-5;
  s.grid = Grid::make_1d(N, 2.0 * kPi / k);
  s.basis = std::make_shared<MomentBasis>(M, 2);
  s.scheme = cfg.scheme.empty() ? "va" : cfg.scheme;
  s.t_end = cfg.t_end >= 0.0 ? cfg.t_end : 50.0;
  s.cfl = cfg.cfl;

  SpeciesState sp;
  sp.params = {"e", 1.0, 1.0};
  sp.cells.reserve(s.grid.ncell());
  std::vector<double> charge(s.grid.ncell());
  for (int i = 0; i < N; ++i) {
    const double x = s.grid.center(i, 0);
    const double rho = 1.0 + A * std::cos(k * x);
    sp.cells.push_back(from_maxwellian(*s.basis, rho, {0, 0, 0}, 1.0));
    charge[i] = s.phys.frequency_ratio * sp.params.charge * rho;
  }
  s.species.push_back(std::move(sp));
  s.field = EmField(s.grid.ncell());
  gauss_consistent_initial_E(s.grid, charge, s.field.E);
  s.f0 = [A, k](double x, double v1, double v2) {
    return maxwellian_2v(1.0 + A * std::cos(k * x), 0.0, 0.0, 1.0, v1, v2);
  };
  return s;
}

ScenarioSetup make_two_stream(const ScenarioConfig& cfg) {
  ScenarioSetup s;
  s.name = "two_stream";
  const int N = cfg.Nx > 0 ? cfg.Nx : 200;
  const int M = cfg.M > 0 ? cfg.M : 30;
  const double k = cfg.k > 0.0 ? cfg.k : 1.0;
  const double A = cfg.A >= 0.0 ? cfg.A : 1e-3;
  const double us = 0.2, Ts = 1e-3;
  s.grid = Grid::make_1d(N, 2.0 * kPi / k);
  s.basis = std::make_shared<MomentBasis>(M, 2);
  s.scheme = cfg.scheme.empty() ? "2" : cfg.scheme;
  s.t_end = cfg.t_end >= 0.0 ? cfg.t_end : 40.0;
  s.cfl = cfg.cfl;

  const std::vector<std::array<double, 3>> stream_u = {{+us, 0, 0}, {-us, 0, 0}};
  const CellMomentState proto = mixture_state(*s.basis, {0.5, 0.5}, stream_u, {Ts, Ts});
  SpeciesState sp;
  sp.params = {"e", 1.0, 1.0};
  sp.cells.assign(s.grid.ncell(), proto);
  s.species.push_back(std::move(sp));
  s.field = EmField(s.grid.ncell());
  for (int i = 0; i < N; ++i)
    s.field.B[i][2] = A * std::sin(k * s.grid.center(i, 0));
  s.f0 = [us, Ts](double, double v1, double v2) {
    return 0.5 * maxwellian_2v(1.0, +us, 0.0, Ts, v1, v2) +
           0.5 * maxwellian_2v(1.0, -us, 0.0, Ts, v1, v2);
  };
  return s;
}

ScenarioSetup make_weibel(const ScenarioConfig& cfg) {
  ScenarioSetup s;
  s.name = "weibel";
  const int N = cfg.Nx > 0 ? cfg.Nx : 512;
  const int M = cfg.M > 0 ? cfg.M : 20;
  const double k = cfg.k > 0.0 ? cfg.k : 0.2;
  const double A = cfg.A >= 0.0 ? cfg.A : 1e-3;
  const double Ts = 5e-3;
  s.grid = Grid::make_1d(N, 2.0 * kPi / k);
  s.basis = std::make_shared<MomentBasis>(M, 2);
  s.scheme = cfg.scheme.empty() ? "2" : cfg.scheme;
  s.t_end = cfg.t_end >= 0.0 ? cfg.t_end : 70.0;
  s.cfl = cfg.cfl;

  const std::vector<std::array<double, 3>> stream_u = {{0, 0.5, 0}, {0, -0.1, 0}};
  const CellMomentState proto =
      mixture_state(*s.basis, {1.0 / 6.0, 5.0 / 6.0}, stream_u, {Ts, Ts});
  SpeciesState sp;
  sp.params = {"e", 1.0, 1.0};
  sp.cells.assign(s.grid.ncell(), proto);
  s.species.push_back(std::move(sp));
  s.field = EmField(s.grid.ncell());
  for (int i = 0; i < N; ++i)
    s.field.B[i][2] = A * std::sin(k * s.grid.center(i, 0));
  s.f0 = [Ts](double, double v1, double v2) {
    return (1.0 / 6.0) * maxwellian_2v(1.0, 0.0, +0.5, Ts, v1, v2) +
           (5.0 / 6.0) * maxwellian_2v(1.0, 0.0, -0.1, Ts, v1, v2);
  };
  return s;
}

ScenarioSetup make_orszag_tang(const ScenarioConfig& cfg) {
  ScenarioSetup s;
  s.name = "orszag_tang";
  const int Nx = cfg.Nx > 0 ? cfg.Nx : 32;
  const int Ny = cfg.Ny > 0 ? cfg.Ny : (cfg.Nx > 0 ? cfg.Nx : 32);
  const int M = cfg.M > 0 ? cfg.M : 8;
  const double B_bar = 0.5, v_bar = 0.5, gamma = 5.0 / 3.0;
  s.grid = Grid::make_2d(Nx, Ny, 2.0 * kPi, 2.0 * kPi);
  s.basis = std::make_shared<MomentBasis>(M, 3);
  s.scheme = cfg.scheme.empty() ? "2" : cfg.scheme;
  s.t_end = cfg.t_end >= 0.0 ? cfg.t_end : 1.0;
  s.cfl = cfg.cfl;
  s.phys.frequency_ratio = 1.0;

  const double rho = gamma * gamma;
  SpeciesState ion, ele;
  ion.params = {"i", +1.0, 25.0};
  ele.params = {"e", -1.0, 1.0};
  ion.cells.reserve(s.grid.ncell());
  ele.cells.reserve(s.grid.ncell());
  s.field = EmField(s.grid.ncell());
  for (int iy = 0; iy < Ny; ++iy)
    for (int ix = 0; ix < Nx; ++ix) {
      const double x = s.grid.center(ix, 0), y = s.grid.center(iy, 1);
      const std::array<double, 3> U{-B_bar * v_bar * std::sin(y),
                                    B_bar * v_bar * std::sin(x), 0.0};
      ion.cells.push_back(from_maxwellian(*s.basis, rho, U, 0.024));
      ele.cells.push_back(from_maxwellian(*s.basis, rho, U, 0.6));
      s.field.B[s.grid.index(ix, iy)] = {0.0, B_bar * std::sin(2.0 * x), 0.0};
    }
  s.species.push_back(std::move(ion));
  s.species.push_back(std::move(ele));
  return s;
}

ScenarioSetup make_bump(const ScenarioConfig& cfg) {
  ScenarioSetup s;
  s.name = "bump";
  const int N = cfg.Nx > 0 ? cfg.Nx : 64;
  const int M = cfg.M > 0 ? cfg.M : 1;
  const double A = cfg.A >= 0.0 ? cfg.A : 0.5;
  const double L = 2.0 * kPi, w = L / 16.0, u0 = 0.5, T0 = 1.0;
  s.grid = Grid::make_1d(N, L);
  s.basis = std::make_shared<MomentBasis>(M, 2);
  s.scheme = cfg.scheme.empty() ? "none" : cfg.scheme;
  s.t_end = cfg.t_end >= 0.0 ? cfg.t_end : 1.0;
  s.cfl = cfg.cfl;

  SpeciesState sp;
  sp.params = {"n", 0.0, 1.0}; // neutral: transport only even with fields on
  sp.cells.reserve(s.grid.ncell());
  for (int i = 0; i < N; ++i) {
    const double x = s.grid.center(i, 0);
    const double dx = x - 0.5 * L;
    const double rho = 1.0 + A * std::exp(-0.5 * dx * dx / (w * w));
    sp.cells.push_back(from_maxwellian(*s.basis, rho, {u0, 0, 0}, T0));
  }
  s.species.push_back(std::move(sp));
  s.field = EmField(s.grid.ncell());
  s.f0 = [A, L, w, u0, T0](double x, double v1, double v2) {
    const double dx = x - 0.5 * L;
    return maxwellian_2v(1.0 + A * std::exp(-0.5 * dx * dx / (w * w)), u0, 0.0, T0, v1,
                         v2);
  };
  return s;
}

} // namespace

ScenarioSetup make_scenario(const ScenarioConfig& cfg) {
  const std::string name = canonical_scenario_name(cfg.scenario);
  if (name == "landau") return make_landau(cfg);
  if (name == "two_stream") return make_two_stream(cfg);
  if (name == "weibel") return make_weibel(cfg);
  if (name == "orszag_tang") return make_orszag_tang(cfg);
  if (name == "bump") return make_bump(cfg);
  throw std::invalid_argument("unknown scenario: " + cfg.scenario);
}

} // namespace hmvm
