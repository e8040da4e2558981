#pragma once

#include "cutfem/types.hpp"

namespace cutfem {

/// Uniform axis-aligned grid of square cells. Cell (i, j) has id i + nx * j.
struct BackgroundGrid {
  Point origin = Point::Zero();
  double h = 1.0;
  int nx = 1;
  int ny = 1;

  BackgroundGrid() = default;
  BackgroundGrid(Point origin_, double h_, int nx_, int ny_) : origin(origin_), h(h_), nx(nx_), ny(ny_) {
    if (!(h > 0.0) || nx < 1 || ny < 1) {
      throw ContractError("BackgroundGrid: requires h > 0 and nx, ny >= 1");
    }
  }

  /// Grid covering [lo, lo + n h]^2.
  static BackgroundGrid square(double lo, double side, int n) { return {Point(lo, lo), side / n, n, n}; }

  int num_cells() const { return nx * ny; }
  int cell_id(int i, int j) const { return i + nx * j; }
  int cell_i(int id) const { return id % nx; }
  int cell_j(int id) const { return id / nx; }

  // Node coordinates are always produced by these two functions so that neighbouring
  // cells share bit-identical edge coordinates.
  double node_x(int i) const { return origin.x() + i * h; }
  double node_y(int j) const { return origin.y() + j * h; }

  Box cell_box(int id) const {
    const int i = cell_i(id);
    const int j = cell_j(id);
    return Box(Point(node_x(i), node_y(j)), Point(node_x(i + 1), node_y(j + 1)));
  }

  Box extent() const { return Box(origin, Point(node_x(nx), node_y(ny))); }
};

}  // namespace cutfem
