#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hmvm/closure.hpp"
#include "hmvm/moment_state.hpp"
#include "test_utils.hpp"

using namespace hmvm;
using test::assemble_jacobian;
using test::predicted_speeds;
using test::quad_raw_moment;
using test::random_native_state;
using test::TupleChart;

namespace {

/// Tangent direction on the constraint manifold (zero grade-1 slots, trace-free
/// diagonal second grade).
TupleGradient random_tangent(const MomentBasis& basis, std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int D = basis.dim();
  TupleGradient g;
  g.drho = uni(rng);
  for (int d = 0; d < D; ++d) g.du[d] = uni(rng);
  g.dT = uni(rng);
  g.dcoef.assign(basis.size(), 0.0);
  const MultiIndexTable& tab = basis.table();
  for (int i = tab.grade_begin(2); i < basis.size(); ++i) g.dcoef[i] = 0.3 * uni(rng);
  double trace = 0.0;
  for (int d = 0; d < D; ++d) {
    MultiIndex a{0, 0, 0};
    a[d] = 2;
    trace += g.dcoef[tab.idx(a)];
  }
  MultiIndex last{0, 0, 0};
  last[D - 1] = 2;
  g.dcoef[tab.idx(last)] -= trace;
  return g;
}

/// State displaced along a tuple direction (used for finite differencing).
CellMomentState displaced(const MomentBasis& basis, const CellMomentState& w0, double h,
                          double drho, const std::array<double, 3>& du, double dT,
                          const std::vector<double>& dcoef) {
  CellMomentState w = w0;
  w.coef[0] += h * drho;
  for (int d = 0; d < 3; ++d) w.u[d] += h * du[d];
  w.T += h * dT;
  for (int i = basis.table().grade_begin(2); i < basis.size(); ++i) w.coef[i] += h * dcoef[i];
  return w;
}

/// Direct evaluation of the magnetic coupling stencil from the Levi-Civita
/// definition, written independently of the library's loop structure.
void epsilon_stencil(const MomentBasis& basis, const std::vector<double>& coef,
                     const std::array<double, 3>& B, double scale, std::vector<double>& out) {
  static const int eps[3][3][3] = {{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
                                   {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
                                   {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
  const MultiIndexTable& tab = basis.table();
  out.assign(basis.size(), 0.0);
  for (int i = 0; i < basis.size(); ++i) {
    const MultiIndex& a = tab[i];
    double acc = 0.0;
    for (int d = 0; d < 3; ++d)
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m) {
          if (eps[d][l][m] == 0 || B[m] == 0.0) continue;
          MultiIndex src = a;
          src[d] -= 1;
          src[l] += 1;
          const int j = tab.idx(src);
          if (j < 0) continue;
          acc += eps[d][l][m] * (a[l] + 1) * B[m] * coef[j];
        }
    out[i] = scale * acc;
  }
}

std::array<double, 3> rodrigues(const std::array<double, 3>& c, const std::array<double, 3>& axis,
                                double theta) {
  const double s = std::sin(theta), k = 1.0 - std::cos(theta);
  const std::array<double, 3> ax_c{axis[1] * c[2] - axis[2] * c[1],
                                   axis[2] * c[0] - axis[0] * c[2],
                                   axis[0] * c[1] - axis[1] * c[0]};
  const std::array<double, 3> ax_ax_c{axis[1] * ax_c[2] - axis[2] * ax_c[1],
                                      axis[2] * ax_c[0] - axis[0] * ax_c[2],
                                      axis[0] * ax_c[1] - axis[1] * ax_c[0]};
  return {c[0] + s * ax_c[0] + k * ax_ax_c[0], c[1] + s * ax_c[1] + k * ax_ax_c[1],
          c[2] + s * ax_c[2] + k * ax_ax_c[2]};
}

} // namespace

TEST_SUITE("closure") {

TEST_CASE("spatially constant state produces zero rates") {
  const MomentBasis basis(4, 3);
  std::mt19937 rng(17);
  const CellMomentState cell = random_native_state(basis, rng);
  TupleGradient g;
  g.dcoef.assign(basis.size(), 0.0);
  const TupleRate L = convective_rhs(basis, cell, {{0, &g}, {1, &g}, {2, &g}});
  CHECK(L.rho == 0.0);
  CHECK(L.T == 0.0);
  for (int d = 0; d < 3; ++d) CHECK(L.u[d] == 0.0);
  for (int i = 0; i < basis.size(); ++i) CHECK(L.coef[i] == 0.0);
}

TEST_CASE("quasi-linear assembly requires at least quadratic order") {
  const MomentBasis basis(1, 2);
  const CellMomentState cell = from_maxwellian(basis, 1.0, {0, 0, 0}, 1.0);
  TupleGradient g;
  g.dcoef.assign(basis.size(), 0.0);
  g.drho = 1.0;
  CHECK_THROWS_AS(convective_rhs(basis, cell, {{0, &g}}), std::invalid_argument);
}

TEST_CASE("maxwellian with a density gradient gives pressure-driven rates") {
  const MomentBasis basis(5, 3);
  const double rho = 1.4, T = 0.8, a = 0.6;
  const std::array<double, 3> u{0.3, -0.5, 0.1};
  const CellMomentState cell = from_maxwellian(basis, rho, u, T);
  for (int j = 0; j < 3; ++j) {
    TupleGradient g;
    g.drho = a;
    g.dcoef.assign(basis.size(), 0.0);
    const TupleRate L = convective_rhs(basis, cell, {{j, &g}});
    // d rho/dt = -u_j a;  d u_j/dt = -(T/rho) a (isothermal pressure);
    // all other tuple entries stationary for a pure density gradient
    CHECK(L.rho == doctest::Approx(u[j] * a).epsilon(1e-14));
    for (int d = 0; d < 3; ++d)
      CHECK(L.u[d] == doctest::Approx(d == j ? T * a / rho : 0.0).epsilon(1e-14));
    CHECK(L.T == doctest::Approx(0.0));
    for (int i = 0; i < basis.size(); ++i) CHECK(std::abs(L.coef[i]) < 1e-14);
  }
}

TEST_CASE("tuple rates satisfy the raw-moment flux identity") {
  // For the truncated expansion the moment system is equivalent to
  // d/dt m_beta + d/dx m_{beta+e_j} = 0 for all |beta| <= M, with both sides
  // evaluated on the truncated distribution.  Both derivatives are computed
  // here by central differences of independent quadrature integrals.
  std::mt19937 rng(321);
  struct Case {
    int M, dim, j;
  };
  for (const Case c : {Case{3, 2, 0}, Case{3, 2, 1}, Case{2, 3, 2}}) {
    const MomentBasis basis(c.M, c.dim);
    const CellMomentState w0 = random_native_state(basis, rng);
    const TupleGradient g = random_tangent(basis, rng);
    const TupleRate L = convective_rhs(basis, w0, {{c.j, &g}});

    // the returned rate must be tangent to the constraint manifold
    double rate_trace = 0.0;
    for (int d = 0; d < c.dim; ++d) {
      MultiIndex e1{0, 0, 0}, e2{0, 0, 0};
      e1[d] = 1;
      e2[d] = 2;
      CHECK(std::abs(L.coef[basis.table().idx(e1)]) < 1e-12);
      rate_trace += L.coef[basis.table().idx(e2)];
    }
    CHECK(std::abs(rate_trace) < 1e-12);

    const double eps = 1e-5;
    const CellMomentState ws_p = displaced(basis, w0, eps, g.drho, g.du, g.dT, g.dcoef);
    const CellMomentState ws_m = displaced(basis, w0, -eps, g.drho, g.du, g.dT, g.dcoef);
    const CellMomentState wt_p = displaced(basis, w0, -eps, L.rho, L.u, L.T, L.coef);
    const CellMomentState wt_m = displaced(basis, w0, eps, L.rho, L.u, L.T, L.coef);

    const MultiIndexTable& tab = basis.table();
    for (int i = 0; i < tab.size(); ++i) {
      const MultiIndex beta = tab[i];
      MultiIndex betaj = beta;
      betaj[c.j] += 1;
      const double dm_dt =
          (quad_raw_moment(basis, wt_p, beta) - quad_raw_moment(basis, wt_m, beta)) / (2.0 * eps);
      const double dF_ds =
          (quad_raw_moment(basis, ws_p, betaj) - quad_raw_moment(basis, ws_m, betaj)) /
          (2.0 * eps);
      CHECK(std::abs(dm_dt + dF_ds) <= 2e-6 * std::max(1.0, std::abs(dF_ds)));
    }
  }
}

TEST_CASE("top-order correction matches direct substitution") {
  const MomentBasis basis(2, 3);
  CellMomentState cell = from_maxwellian(basis, 1.0, {0, 0, 0}, 1.0);
  const double c = 0.42;
  const MultiIndexTable& tab = basis.table();
  cell.coef[tab.idx({2, 0, 0})] = c;
  cell.coef[tab.idx({0, 2, 0})] = -c; // keep the trace constraint

  std::vector<double> out;
  const std::array<double, 3> du{1.0, 0.0, 0.0};
  regularization_correction(basis, cell.coef, 0, du, 0.0, out);
  // R(2e_1) = (alpha_1 + 1) f_{2e_1 - e_1 + e_1} du_1 = 3 f_{2e_1}
  CHECK(out[tab.idx({2, 0, 0})] == doctest::Approx(3.0 * c).epsilon(1e-15));
  // rows below the top grade untouched
  for (int i = 0; i < tab.grade_begin(2); ++i) CHECK(out[i] == 0.0);

  // zero gradients produce no correction
  regularization_correction(basis, cell.coef, 0, {0, 0, 0}, 0.0, out);
  for (int i = 0; i < basis.size(); ++i) CHECK(out[i] == 0.0);
}

TEST_CASE("top-order correction is supported on the top grade only") {
  const MomentBasis basis(5, 3);
  std::mt19937 rng(9);
  const CellMomentState cell = random_native_state(basis, rng);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int j = 0; j < 3; ++j) {
    const std::array<double, 3> du{uni(rng), uni(rng), uni(rng)};
    const double dT = uni(rng);
    std::vector<double> out;
    regularization_correction(basis, cell.coef, j, du, dT, out);
    REQUIRE(static_cast<int>(out.size()) == basis.size());
    for (int i = 0; i < basis.table().grade_begin(5); ++i) CHECK(out[i] == 0.0);
    double nonzero = 0.0;
    for (int i = basis.table().grade_begin(5); i < basis.size(); ++i) nonzero += std::abs(out[i]);
    CHECK(nonzero > 0.0);
  }
}

TEST_CASE("wave speed bounds from the truncation order") {
  const MomentBasis m1(1, 2);
  const auto s1 = char_speeds(m1, 0.0, 1.0);
  CHECK(s1[0] == doctest::Approx(-1.0).epsilon(1e-14)); // roots of He_2
  CHECK(s1[1] == doctest::Approx(1.0).epsilon(1e-14));

  const MomentBasis m2(2, 2);
  const auto s2 = char_speeds(m2, 0.5, 2.0);
  CHECK(s2[0] == doctest::Approx(0.5 - std::sqrt(3.0 * 2.0)).epsilon(1e-14));
  CHECK(s2[1] == doctest::Approx(0.5 + std::sqrt(3.0 * 2.0)).epsilon(1e-14));

  // vanishing-temperature limit collapses both bounds onto the advection speed
  const auto s3 = char_speeds(m2, 0.7, 1e-300);
  CHECK(s3[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(s3[1] == doctest::Approx(0.7).epsilon(1e-12));

  // consistency with the stored speed factor
  const MomentBasis m5(5, 3);
  const auto s5 = char_speeds(m5, -0.3, 0.9);
  CHECK(s5[1] == doctest::Approx(-0.3 + m5.hermite().speed_factor() * std::sqrt(0.9)));
  CHECK(s5[0] == doctest::Approx(-0.3 - m5.hermite().speed_factor() * std::sqrt(0.9)));
}

TEST_CASE("corrected system has the predicted real spectrum") {
  std::mt19937 rng(777);
  for (const int M : {3, 5}) {
    const MomentBasis basis(M, 2);
    const CellMomentState cell = random_native_state(basis, rng);
    const std::array<double, 3> n{1.0, 0.0, 0.0};
    const std::vector<double> A = assemble_jacobian(basis, cell, n, true);
    const int nn = basis.size();
    Eigen::MatrixXd mat(nn, nn);
    for (int r = 0; r < nn; ++r)
      for (int c = 0; c < nn; ++c) mat(r, c) = A[static_cast<std::size_t>(r) * nn + c];
    const Eigen::EigenSolver<Eigen::MatrixXd> es(mat);
    std::vector<double> ev(nn);
    const double scale = std::abs(cell.u[0]) + std::sqrt(cell.T);
    for (int i = 0; i < nn; ++i) {
      CHECK(std::abs(es.eigenvalues()[i].imag()) < 1e-8 * scale);
      ev[i] = es.eigenvalues()[i].real();
    }
    std::sort(ev.begin(), ev.end());
    const std::vector<double> pred = predicted_speeds(basis, cell, n);
    REQUIRE(pred.size() == ev.size());
    for (int i = 0; i < nn; ++i)
      CHECK(std::abs(ev[i] - pred[i]) < 1e-8 * std::max(1.0, scale));
    // the spectral radius matches the advertised wave-speed bounds
    const auto bounds = char_speeds(basis, cell.u[0], cell.T);
    CHECK(ev.front() == doctest::Approx(bounds[0]).epsilon(1e-10));
    CHECK(ev.back() == doctest::Approx(bounds[1]).epsilon(1e-10));
  }
}

TEST_CASE("without the correction the spectrum acquires complex pairs") {
  const MomentBasis basis(3, 2);
  CellMomentState cell = from_maxwellian(basis, 1.0, {0.0, 0.0, 0.0}, 1.0);
  cell.coef[basis.table().idx({3, 0, 0})] = 0.8; // strong odd tail
  const std::array<double, 3> n{1.0, 0.0, 0.0};
  const std::vector<double> A = assemble_jacobian(basis, cell, n, false);
  const int nn = basis.size();
  Eigen::MatrixXd mat(nn, nn);
  for (int r = 0; r < nn; ++r)
    for (int c = 0; c < nn; ++c) mat(r, c) = A[static_cast<std::size_t>(r) * nn + c];
  const Eigen::EigenSolver<Eigen::MatrixXd> es(mat);
  double max_imag = 0.0;
  for (int i = 0; i < nn; ++i) max_imag = std::max(max_imag, std::abs(es.eigenvalues()[i].imag()));
  CHECK(max_imag > 1e-3);

  // and the corrected assembly of the same state is clean
  const std::vector<double> Ar = assemble_jacobian(basis, cell, n, true);
  for (int r = 0; r < nn; ++r)
    for (int c = 0; c < nn; ++c) mat(r, c) = Ar[static_cast<std::size_t>(r) * nn + c];
  const Eigen::EigenSolver<Eigen::MatrixXd> es2(mat);
  for (int i = 0; i < nn; ++i) CHECK(std::abs(es2.eigenvalues()[i].imag()) < 1e-8);
}

TEST_CASE("magnetic generator vanishes for zero field") {
  const MomentBasis basis(4, 3);
  std::mt19937 rng(5);
  const CellMomentState cell = random_native_state(basis, rng);
  std::vector<double> out;
  magnetic_rotation_apply(basis, cell.coef, {0.0, 0.0, 0.0}, 1.3, out);
  for (int i = 0; i < basis.size(); ++i) CHECK(out[i] == 0.0);
}

TEST_CASE("magnetic generator preserves grade blocks and native constraints") {
  const MomentBasis basis(5, 3);
  std::mt19937 rng(6);
  const CellMomentState cell = random_native_state(basis, rng);
  const std::array<double, 3> B{0.4, -0.7, 0.9};
  std::vector<double> out;
  magnetic_rotation_apply(basis, cell.coef, B, 0.8, out);

  const MultiIndexTable& tab = basis.table();
  // grade blocks: zeroing all but one grade of the input keeps the output in
  // that grade
  for (int g = 2; g <= 5; ++g) {
    std::vector<double> coef_g(basis.size(), 0.0);
    for (int i = tab.grade_begin(g); i < tab.grade_end(g); ++i) coef_g[i] = cell.coef[i];
    std::vector<double> out_g;
    magnetic_rotation_apply(basis, coef_g, B, 0.8, out_g);
    for (int i = 0; i < basis.size(); ++i)
      if (tab.total_degree(i) != g) CHECK(out_g[i] == 0.0);
  }

  // native constraints are preserved: no mass, center, or trace production
  CHECK(out[0] == 0.0);
  double trace = 0.0;
  for (int d = 0; d < 3; ++d) {
    MultiIndex e1{0, 0, 0}, e2{0, 0, 0};
    e1[d] = 1;
    e2[d] = 2;
    CHECK(std::abs(out[tab.idx(e1)]) < 1e-15);
    trace += out[tab.idx(e2)];
  }
  CHECK(std::abs(trace) < 1e-14);

  // agreement with a directly-coded Levi-Civita stencil
  std::vector<double> ref;
  epsilon_stencil(basis, cell.coef, B, 0.8, ref);
  for (int i = 0; i < basis.size(); ++i)
    CHECK(out[i] == doctest::Approx(ref[i]).epsilon(1e-13));
}

TEST_CASE("planar field couples the mixed quadratic to the diagonal ones") {
  const MomentBasis basis(3, 2);
  const MultiIndexTable& tab = basis.table();
  const double b = 0.6, s = 1.1;
  std::vector<double> coef(basis.size(), 0.0), out;

  coef[tab.idx({0, 2, 0})] = 1.0;
  magnetic_rotation_apply(basis, coef, {0.0, 0.0, b}, s, out);
  const double w02 = out[tab.idx({1, 1, 0})];

  std::fill(coef.begin(), coef.end(), 0.0);
  coef[tab.idx({2, 0, 0})] = 1.0;
  out.clear(); // the generator accumulates into a same-sized buffer
  magnetic_rotation_apply(basis, coef, {0.0, 0.0, b}, s, out);
  const double w20 = out[tab.idx({1, 1, 0})];

  CHECK(std::abs(w02) == doctest::Approx(2.0 * s * b).epsilon(1e-14));
  CHECK(w20 == doctest::Approx(-w02).epsilon(1e-14));
}

TEST_CASE("magnetic generator equals the derivative of the exact rotation flow") {
  // The generator must be the time derivative at zero of re-projecting the
  // distribution transported along the rotation characteristics
  // c(t) = exp(-s t [B]x) c(0), i.e. f_t(v) = f_0(u + R(+theta)(v - u)).
  std::mt19937 rng(31);
  for (int dim : {2, 3}) {
    const MomentBasis basis(4, dim);
    const CellMomentState cell = random_native_state(basis, rng);
    const std::array<double, 3> B =
        dim == 2 ? std::array<double, 3>{0.0, 0.0, 0.7} : std::array<double, 3>{0.3, -0.2, 0.5};
    const double s = 0.8;
    const double Bn = std::sqrt(B[0] * B[0] + B[1] * B[1] + B[2] * B[2]);
    const std::array<double, 3> axis{B[0] / Bn, B[1] / Bn, B[2] / Bn};

    std::vector<double> gen;
    magnetic_rotation_apply(basis, cell.coef, B, s, gen);

    const double dt = 1e-5;
    auto project_rotated = [&](double theta) {
      const auto f = [&](const std::array<double, 3>& v) {
        std::array<double, 3> c{v[0] - cell.u[0], v[1] - cell.u[1],
                                dim == 3 ? v[2] - cell.u[2] : 0.0};
        const std::array<double, 3> c0 = rodrigues(c, axis, theta);
        const std::array<double, 3> v0{cell.u[0] + c0[0], cell.u[1] + c0[1],
                                       dim == 3 ? cell.u[2] + c0[2] : 0.0};
        return eval_distribution(basis, cell, v0);
      };
      return project_to_basis(basis, f, cell.u, cell.T, basis.order() + 10);
    };
    const CellMomentState plus = project_rotated(s * dt * Bn);
    const CellMomentState minus = project_rotated(-s * dt * Bn);
    for (int i = 0; i < basis.size(); ++i) {
      const double fd = (plus.coef[i] - minus.coef[i]) / (2.0 * dt);
      CHECK(std::abs(fd - gen[i]) <= 1e-8 * std::max(1.0, std::abs(gen[i])));
    }
  }
}

} // TEST_SUITE
