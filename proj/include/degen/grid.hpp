#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "degen/errors.hpp"

namespace degen {

/// Uniform cell-centered grid on [x0,x1] x [y0,y1].  When the rectangle
/// straddles x = 0 the cell layout must put x = 0 on a cell boundary so that
/// no center sits on the degenerate column; the symmetric constructor
/// enforces this with even cell counts.
struct Grid2D {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
  int nx = 0, ny = 0;
  double hx = 0.0, hy = 0.0;

  Grid2D() = default;

  /// Symmetric rectangle [-X,X] x [-Y,Y].
  Grid2D(double X, double Y, int nx_, int ny_)
      : Grid2D(make(-X, X, -Y, Y, nx_, ny_)) {}

  static Grid2D make(double x0_, double x1_, double y0_, double y1_, int nx_, int ny_) {
    if (nx_ <= 1 || ny_ <= 1) throw precondition_error("Grid2D: cell counts too small");
    if (!(x1_ > x0_ && y1_ > y0_)) throw precondition_error("Grid2D: empty rectangle");
    Grid2D g;
    g.x0 = x0_;
    g.x1 = x1_;
    g.y0 = y0_;
    g.y1 = y1_;
    g.nx = nx_;
    g.ny = ny_;
    g.hx = (x1_ - x0_) / nx_;
    g.hy = (y1_ - y0_) / ny_;
    if (x0_ < 0.0 && x1_ > 0.0) {
      const double cells_left = -x0_ / g.hx;
      if (std::abs(cells_left - std::round(cells_left)) > 1e-9)
        throw precondition_error(
            "Grid2D: x = 0 must fall on a cell boundary (stagger the grid)");
    }
    return g;
  }

  std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) +
           static_cast<std::size_t>(i);
  }
  double x(int i) const { return x0 + (i + 0.5) * hx; }
  double y(int j) const { return y0 + (j + 0.5) * hy; }
  double cell_area() const { return hx * hy; }
  /// Half-extent in x for symmetric grids (used by radius preconditions).
  double half_extent_x() const { return 0.5 * (x1 - x0); }
  bool same_shape(const Grid2D& o) const { return nx == o.nx && ny == o.ny; }
};

/// Per-cell scalar field.
struct GridFunction {
  Grid2D grid;
  std::vector<double> v;
  bool compact_support = false;  // claims supp subset of B(center, support_radius)
  double support_radius = 0.0;

  GridFunction() = default;
  explicit GridFunction(const Grid2D& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

  double& at(int i, int j) { return v[grid.idx(i, j)]; }
  double at(int i, int j) const { return v[grid.idx(i, j)]; }
};

}  // namespace degen
