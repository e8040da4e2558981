#include "cutfem/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>

namespace cutfem {

ActiveMesh::ActiveMesh(BackgroundGrid grid, std::vector<ElementClass> classes)
    : grid_(grid), classes_(std::move(classes)), active_index_(classes_.size(), -1) {
  if (classes_.size() != static_cast<std::size_t>(grid_.num_cells())) {
    throw MeshError("ActiveMesh: classification size does not match the grid");
  }
  for (int id = 0; id < grid_.num_cells(); ++id) {
    if (is_active(id)) {
      active_index_[static_cast<std::size_t>(id)] = static_cast<int>(active_.size());
      active_.push_back(id);
    }
  }
}

std::vector<int> cells_near_segment(const BackgroundGrid& grid, const Point& a, const Point& b, double pad) {
  auto index = [&](double c, double origin, int n) {
    return std::clamp(static_cast<int>(std::floor((c - origin) / grid.h)), 0, n - 1);
  };
  const int i0 = index(std::min(a.x(), b.x()) - pad, grid.origin.x(), grid.nx);
  const int i1 = index(std::max(a.x(), b.x()) + pad, grid.origin.x(), grid.nx);
  const int j0 = index(std::min(a.y(), b.y()) - pad, grid.origin.y(), grid.ny);
  const int j1 = index(std::max(a.y(), b.y()) + pad, grid.origin.y(), grid.ny);
  std::vector<int> cells;
  cells.reserve(static_cast<std::size_t>((i1 - i0 + 1) * (j1 - j0 + 1)));
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) cells.push_back(grid.cell_id(i, j));
  }
  return cells;
}

bool clip_segment_to_box(const Point& a, const Point& b, const Box& box, double& t0, double& t1) {
  const Point d = b - a;
  t0 = 0.0;
  t1 = 1.0;
  const std::array<std::pair<double, double>, 4> planes{{
      {-d.x(), a.x() - box.min().x()},
      {d.x(), box.max().x() - a.x()},
      {-d.y(), a.y() - box.min().y()},
      {d.y(), box.max().y() - a.y()},
  }};
  for (const auto& [p, q] : planes) {
    if (p == 0.0) {
      if (q < 0.0) return false;
      continue;
    }
    const double t = q / p;
    if (p < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return false;
  }
  return true;
}

namespace {

bool strictly_inside(const Box& box, const Point& x) {
  return box.min().x() < x.x() && x.x() < box.max().x() && box.min().y() < x.y() && x.y() < box.max().y();
}

}  // namespace

ActiveMesh classify_elements(const BackgroundGrid& grid, const BoundaryPolygon& poly) {
  const Box extent = grid.extent();
  const Box bbox = poly.bounding_box();
  if (!(extent.min().array() < bbox.min().array()).all() || !(bbox.max().array() < extent.max().array()).all()) {
    throw MeshError("classify_elements: polygon extends outside the background grid");
  }

  std::vector<ElementClass> classes(static_cast<std::size_t>(grid.num_cells()), ElementClass::Outside);
  const PointList& v = poly.vertices();
  const Eigen::Index n = v.cols();

  // Cells whose open interior the boundary passes through.
  for (Eigen::Index s = 0; s < n; ++s) {
    const Point a = v.col(s);
    const Point b = v.col((s + 1) % n);
    for (int cell : cells_near_segment(grid, a, b, 1e-12 * grid.h)) {
      const Box box = grid.cell_box(cell);
      double t0 = 0.0;
      double t1 = 0.0;
      if (!clip_segment_to_box(a, b, box, t0, t1) || !(t1 > t0)) continue;
      if (strictly_inside(box, a + 0.5 * (t0 + t1) * (b - a))) {
        classes[static_cast<std::size_t>(cell)] = ElementClass::Cut;
      }
    }
  }

  // Remaining cells: even-odd test at the cell centre, one scanline per row.
  std::vector<double> crossings;
  for (int j = 0; j < grid.ny; ++j) {
    const double yc = grid.node_y(j) + 0.5 * grid.h;
    crossings.clear();
    for (Eigen::Index s = 0; s < n; ++s) {
      const Point a = v.col(s);
      const Point b = v.col((s + 1) % n);
      if ((a.y() > yc) != (b.y() > yc)) {
        crossings.push_back(a.x() + (yc - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    std::size_t left = 0;  // crossings at or left of the current centre
    for (int i = 0; i < grid.nx; ++i) {
      const double xc = grid.node_x(i) + 0.5 * grid.h;
      while (left < crossings.size() && crossings[left] <= xc) ++left;
      auto& cls = classes[static_cast<std::size_t>(grid.cell_id(i, j))];
      if (cls == ElementClass::Cut) continue;
      const bool inside = ((crossings.size() - left) % 2) == 1;
      cls = inside ? ElementClass::Inside : ElementClass::Outside;
    }
  }

  ActiveMesh mesh(grid, std::move(classes));
  mesh.set_ghost_faces(ghost_faces(mesh));
  return mesh;
}

std::vector<GhostFace> ghost_faces(const ActiveMesh& mesh) {
  const BackgroundGrid& grid = mesh.grid();
  std::vector<GhostFace> faces;
  auto consider = [&](int first, int second, Axis axis) {
    if (!mesh.is_active(first) || !mesh.is_active(second)) return;
    if (mesh.classification(first) == ElementClass::Cut || mesh.classification(second) == ElementClass::Cut) {
      faces.push_back({first, second, axis});
    }
  };
  for (int cell : mesh.active()) {
    const int i = grid.cell_i(cell);
    const int j = grid.cell_j(cell);
    if (i + 1 < grid.nx) consider(cell, grid.cell_id(i + 1, j), Axis::X);
    if (j + 1 < grid.ny) consider(cell, grid.cell_id(i, j + 1), Axis::Y);
  }
  std::sort(faces.begin(), faces.end(), [](const GhostFace& l, const GhostFace& r) {
    return std::tuple(static_cast<int>(l.axis), l.first) < std::tuple(static_cast<int>(r.axis), r.first);
  });
  return faces;
}

}  // namespace cutfem
