#include "hmvm/multi_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace hmvm {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MultiIndexTable::MultiIndexTable(int max_order, int dim) : max_order_(max_order), dim_(dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("MultiIndexTable: dim must be 2 or 3");
  if (max_order < 1) throw std::invalid_argument("MultiIndexTable: max_order must be >= 1");

  grade_begin_.assign(max_order + 2, 0);
  // Grade by grade; within a grade descending lexicographic on (a0, a1, a2),
  // which reproduces the moment system's N(alpha) order.
  for (int g = 0; g <= max_order; ++g) {
    grade_begin_[g] = static_cast<int>(indices_.size());
    if (dim == 2) {
      for (int a0 = g; a0 >= 0; --a0) indices_.push_back({a0, g - a0, 0});
    } else {
      for (int a0 = g; a0 >= 0; --a0)
        for (int a1 = g - a0; a1 >= 0; --a1) indices_.push_back({a0, a1, g - a0 - a1});
    }
  }
  grade_begin_[max_order + 1] = static_cast<int>(indices_.size());

  degree_.resize(indices_.size());
  for (size_t i = 0; i < indices_.size(); ++i)
    degree_[i] = indices_[i][0] + indices_[i][1] + indices_[i][2];

  stride1_ = max_order + 1;
  stride0_ = stride1_ * stride1_;
  lookup_.assign(static_cast<size_t>(stride0_) * stride1_, -1);
  for (size_t i = 0; i < indices_.size(); ++i) {
    const auto& a = indices_[i];
    lookup_[static_cast<size_t>(a[0]) * stride0_ + a[1] * stride1_ + a[2]] =
        static_cast<int32_t>(i);
  }

  for (int d = 0; d < dim; ++d) {
    up_[d].resize(indices_.size());
    down_[d].resize(indices_.size());
    for (size_t i = 0; i < indices_.size(); ++i) {
      MultiIndex a = indices_[i];
      a[d] += 1;
      up_[d][i] = static_cast<int32_t>(idx(a));
      a[d] -= 2;
      down_[d][i] = static_cast<int32_t>(idx(a));
    }
  }

  for (int d = 0; d < dim; ++d) {
    // one line per base index with alpha_d = 0, walking alpha_d upward
    for (size_t i = 0; i < indices_.size(); ++i) {
      if (indices_[i][d] != 0) continue;
      std::vector<int32_t> line;
      int cur = static_cast<int>(i);
      while (cur >= 0) {
        line.push_back(static_cast<int32_t>(cur));
        cur = up_[d][cur];
      }
      lines_[d].push_back(std::move(line));
    }
  }
}

int MultiIndexTable::idx(const MultiIndex& a) const {
  for (int d = 0; d < 3; ++d)
    if (a[d] < 0) return -1;
  if (a[0] + a[1] + a[2] > max_order_) return -1;
  return lookup_[static_cast<size_t>(a[0]) * stride0_ + a[1] * stride1_ + a[2]];
}

} // namespace hmvm
