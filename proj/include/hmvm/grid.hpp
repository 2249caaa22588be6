#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace hmvm {

/// Uniform periodic spatial grid, one or two dimensions, cell-centered.
struct Grid {
  int sdim = 1;
  std::array<int, 2> n{1, 1};
  std::array<double, 2> length{1.0, 1.0};
  std::array<double, 2> dx{1.0, 1.0};

  static Grid make_1d(int nx, double lx) {
    if (nx < 4) throw std::invalid_argument("Grid: need at least 4 cells per direction");
    Grid g;
    g.sdim = 1;
    g.n = {nx, 1};
    g.length = {lx, 1.0};
    g.dx = {lx / nx, 1.0};
    return g;
  }
  static Grid make_2d(int nx, int ny, double lx, double ly) {
    if (nx < 4 || ny < 4) throw std::invalid_argument("Grid: need at least 4 cells per direction");
    Grid g;
    g.sdim = 2;
    g.n = {nx, ny};
    g.length = {lx, ly};
    g.dx = {lx / nx, ly / ny};
    return g;
  }

  std::size_t ncell() const { return static_cast<std::size_t>(n[0]) * n[1]; }
  double cell_volume() const { return sdim == 1 ? dx[0] : dx[0] * dx[1]; }

  std::size_t index(int ix, int iy = 0) const {
    return static_cast<std::size_t>(iy) * n[0] + ix;
  }
  /// Cell-center coordinate in direction d.
  double center(int i, int d) const { return (i + 0.5) * dx[d]; }
  int wrap(int i, int d) const {
    int m = n[d];
    i %= m;
    return i < 0 ? i + m : i;
  }
  /// Periodic neighbor of flat cell index `c` shifted by `off` cells along d.
  std::size_t neighbor(std::size_t c, int d, int off) const {
    int ix = static_cast<int>(c % n[0]);
    int iy = static_cast<int>(c / n[0]);
    if (d == 0)
      ix = wrap(ix + off, 0);
    else
      iy = wrap(iy + off, 1);
    return index(ix, iy);
  }
};

} // namespace hmvm
