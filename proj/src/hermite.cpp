#include "hmvm/hermite.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hmvm {

double hermite_he(int k, double x) { return hermite_he_pair(k, x).first; }

std::pair<double, double> hermite_he_pair(int k, double x) {
  if (k < 0) return {0.0, 0.0};
  double pm1 = 0.0; // He_{j-1}
  double p = 1.0;   // He_j
  for (int j = 0; j < k; ++j) {
    double pn = x * p - j * pm1;
    pm1 = p;
    p = pn;
  }
  return {p, k * pm1};
}

std::vector<double> hermite_roots(int k) {
  if (k < 1) throw std::invalid_argument("hermite_roots: order must be >= 1");
  if (k == 1) return {0.0};
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd sub(k - 1);
  for (int i = 1; i < k; ++i) sub[i - 1] = std::sqrt(static_cast<double>(i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> r(k);
  for (int i = 0; i < k; ++i) {
    double x = es.eigenvalues()[i];
    auto [v, dv] = hermite_he_pair(k, x);
    if (dv != 0.0) x -= v / dv; // one Newton step
    r[i] = x;
  }
  // enforce exact odd symmetry of the root set
  for (int i = 0; i < k / 2; ++i) {
    double m = 0.5 * (r[k - 1 - i] - r[i]);
    r[i] = -m;
    r[k - 1 - i] = m;
  }
  if (k % 2 == 1) r[k / 2] = 0.0;
  return r;
}

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  const double mu0 = std::sqrt(2.0 * std::numbers::pi);
  GaussHermiteRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {mu0};
    return rule;
  }
  rule.nodes = hermite_roots(n);
  rule.weights.resize(n);
  // w_i = mu0 / (n * p_{n-1}(x_i)^2) with p_k the orthonormal polynomials
  // He_k / sqrt(k!).  Unlike eigenvector-component weights this keeps full
  // relative accuracy at the extreme nodes, where the components underflow
  // toward machine noise.
  for (int i = 0; i < n; ++i) {
    const double x = rule.nodes[i];
    double pm1 = 0.0, p = 1.0;
    for (int k = 0; k < n - 1; ++k) {
      const double pn = (x * p - std::sqrt(static_cast<double>(k)) * pm1) /
                        std::sqrt(static_cast<double>(k + 1));
      pm1 = p;
      p = pn;
    }
    rule.weights[i] = mu0 / (n * p * p);
  }
  // enforce exact even symmetry of the weights
  for (int i = 0; i < n / 2; ++i) {
    const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

HermiteTable::HermiteTable(int max_order, int dim) : max_order_(max_order), dim_(dim) {
  if (max_order < 1) throw std::invalid_argument("HermiteTable: max_order must be >= 1");
  roots_.resize(max_order + 2);
  for (int k = 1; k <= max_order + 1; ++k) roots_[k] = hermite_roots(k);
  speed_factor_ = roots_[max_order + 1].back();
  quad_ = gauss_hermite(max_order + 8);
}

double basis_eval(const MultiIndex& alpha, int dim, double T, const double* xi) {
  if (!(T > 0.0)) throw std::invalid_argument("basis_eval: T must be positive");
  int total = 0;
  double prod = 1.0;
  for (int d = 0; d < dim; ++d) {
    total += alpha[d];
    prod *= hermite_he(alpha[d], xi[d]) * std::exp(-0.5 * xi[d] * xi[d]);
  }
  double norm = std::pow(2.0 * std::numbers::pi, -0.5 * dim) *
                std::pow(T, -0.5 * (total + dim));
  return norm * prod;
}

} // namespace hmvm
