#pragma once

#include <utility>
#include <vector>

#include "hmvm/multi_index.hpp"

namespace hmvm {

/// He_k(x), probabilists' convention: He_0 = 1, He_1 = x,
/// He_{k+1} = x He_k - k He_{k-1}.
double hermite_he(int k, double x);

/// Value and derivative (He_k, He_k' = k He_{k-1}) in one recurrence pass.
std::pair<double, double> hermite_he_pair(int k, double x);

/// The k roots of He_k, ascending.  Jacobi-matrix eigenvalues followed by one
/// Newton polish.
std::vector<double> hermite_roots(int k);

/// Gauss quadrature for the weight exp(-x^2/2) on (-inf, inf):
/// sum_i w_i p(x_i) = int p(x) exp(-x^2/2) dx exactly for deg p <= 2n-1.
/// Total weight sum is sqrt(2*pi).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermiteRule gauss_hermite(int n);

/// Immutable per-(M, D) numeric tables: Hermite roots through order M+1 and a
/// quadrature rule of order M+8 for projections.
class HermiteTable {
public:
  HermiteTable(int max_order, int dim);

  int order() const { return max_order_; }
  int dim() const { return dim_; }
  /// Largest root of He_{M+1}; the closure's characteristic speed factor.
  double speed_factor() const { return speed_factor_; }
  const std::vector<double>& roots(int k) const { return roots_[k]; }
  const GaussHermiteRule& quadrature() const { return quad_; }

private:
  int max_order_;
  int dim_;
  double speed_factor_;
  std::vector<std::vector<double>> roots_; // roots_[k] = roots of He_k, k in [1, M+1]
  GaussHermiteRule quad_;
};

/// Weighted basis function value
///   H_{T,alpha}(xi) = (2 pi)^{-D/2} T^{-(|alpha|+D)/2}
///                     prod_d He_{alpha_d}(xi_d) exp(-xi_d^2 / 2)
/// with xi the already-scaled velocity (v - u)/sqrt(T).  dim is the number of
/// active components of xi.
double basis_eval(const MultiIndex& alpha, int dim, double T, const double* xi);

} // namespace hmvm
