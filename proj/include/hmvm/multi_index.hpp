#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace hmvm {

/// Velocity-space multi-index with up to three components.
/// Components beyond the active dimension are zero.
using MultiIndex = std::array<int, 3>;

/// Enumeration of all multi-indices with |alpha| <= max_order in `dim`
/// velocity dimensions, in graded order (grade = |alpha|), descending
/// lexicographic within each grade.  This matches the linearization
///   N(alpha) = 1 + sum_i C(alpha_{D-i+1}+...+alpha_D + i - 1, i)
/// used by the moment system's matrix indexing (idx = N - 1).
class MultiIndexTable {
public:
  MultiIndexTable(int max_order, int dim);

  int order() const { return max_order_; }
  int dim() const { return dim_; }
  /// Number of indices, C(max_order + dim, dim).
  int size() const { return static_cast<int>(indices_.size()); }

  const MultiIndex& operator[](int i) const { return indices_[i]; }
  int total_degree(int i) const { return degree_[i]; }

  /// Flat index of alpha; -1 if out of range (any component negative or
  /// |alpha| > max_order).
  int idx(const MultiIndex& a) const;

  /// idx(alpha + e_d), or -1 when |alpha| = max_order.  d in [0, dim).
  int up(int i, int d) const { return up_[d][i]; }
  /// idx(alpha - e_d), or -1 when alpha_d = 0.
  int down(int i, int d) const { return down_[d][i]; }
  /// idx(alpha - e_d + e_l), or -1 when alpha_d = 0.
  int shift(int i, int d, int l) const {
    int j = down_[d][i];
    return j < 0 ? -1 : up_[l][j];
  }

  /// First flat index of grade g (indices are contiguous per grade).
  int grade_begin(int g) const { return grade_begin_[g]; }
  int grade_end(int g) const { return grade_begin_[g + 1]; }

  /// Flat indices grouped into 1-D lines along dimension d: within a line all
  /// other components are fixed and alpha_d runs 0,1,2,...  Used by the
  /// re-expansion maps.
  const std::vector<std::vector<int32_t>>& lines(int d) const { return lines_[d]; }

private:
  int max_order_;
  int dim_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degree_;
  std::vector<int> grade_begin_;
  std::array<std::vector<int32_t>, 3> up_;
  std::array<std::vector<int32_t>, 3> down_;
  std::array<std::vector<std::vector<int32_t>>, 3> lines_;
  // dense lookup keyed by (a0*stride0 + a1*stride1 + a2)
  std::vector<int32_t> lookup_;
  int stride0_ = 0, stride1_ = 0;
};

/// C(n, k) in exact integer arithmetic (small arguments).
long long binomial(int n, int k);

} // namespace hmvm
