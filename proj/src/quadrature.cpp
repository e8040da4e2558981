#include "cutfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cutfem {

namespace {

// Growable point/weight buffers, converted to Eigen storage once complete.
struct VolumeAccumulator {
  std::vector<Point> points;
  std::vector<double> weights;

  void append(const CutVolumeRule& rule) {
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      points.push_back(rule.points.col(q));
      weights.push_back(rule.weights(q));
    }
  }

  CutVolumeRule finish() const {
    CutVolumeRule rule;
    rule.points.resize(2, static_cast<Eigen::Index>(points.size()));
    rule.weights.resize(static_cast<Eigen::Index>(weights.size()));
    for (std::size_t q = 0; q < points.size(); ++q) {
      rule.points.col(static_cast<Eigen::Index>(q)) = points[q];
      rule.weights(static_cast<Eigen::Index>(q)) = weights[q];
    }
    return rule;
  }
};

struct BoundaryAccumulator {
  std::vector<Point> points;
  std::vector<double> weights;
  std::vector<Point> normals;

  CutBoundaryRule finish() const {
    CutBoundaryRule rule;
    const auto n = static_cast<Eigen::Index>(points.size());
    rule.points.resize(2, n);
    rule.weights.resize(n);
    rule.normals.resize(2, n);
    for (Eigen::Index q = 0; q < n; ++q) {
      rule.points.col(q) = points[static_cast<std::size_t>(q)];
      rule.weights(q) = weights[static_cast<std::size_t>(q)];
      rule.normals.col(q) = normals[static_cast<std::size_t>(q)];
    }
    return rule;
  }
};

bool strictly_inside(const Box& box, const Point& x) {
  return box.min().x() < x.x() && x.x() < box.max().x() && box.min().y() < x.y() && x.y() < box.max().y();
}

// Adds the Gauss points of the part of segment (a, b) that belongs to `box`.
void add_segment_piece(const Point& a, const Point& b, const Box& box, const QuadRule1D<double>& gauss,
                       BoundaryAccumulator& acc) {
  double t0 = 0.0;
  double t1 = 0.0;
  if (!clip_segment_to_box(a, b, box, t0, t1)) return;
  const Point p = a + t0 * (b - a);
  const Point q = a + t1 * (b - a);
  const double length = (q - p).norm();
  const double h = box.sizes().minCoeff();
  if (!(length >= 1e-14 * h)) return;
  const Point normal = segment_outward_normal(a, b);
  const Point mid = 0.5 * (p + q);
  // A piece on the box edge belongs to the element on its interior side.
  if (!strictly_inside(box, mid) && !strictly_inside(box, mid - 1e-9 * h * normal)) return;
  for (Eigen::Index k = 0; k < gauss.points.size(); ++k) {
    const double s = 0.5 * (1.0 + gauss.points(k));
    acc.points.push_back(p + s * (q - p));
    acc.weights.push_back(0.5 * length * gauss.weights(k));
    acc.normals.push_back(normal);
  }
}

CutVolumeRule rule_on_components(const std::vector<PointList>& components, int order) {
  VolumeAccumulator acc;
  for (const PointList& component : components) {
    for (const Triangle& tri : triangulate_polygon(component)) acc.append(triangle_rule(tri, 2 * order));
  }
  return acc.finish();
}

double total_area(const std::vector<PointList>& components) {
  double area = 0.0;
  for (const auto& c : components) area += shoelace_area(c);
  return area;
}

}  // namespace

CutVolumeRule box_rule(const Box& box, int order) {
  const auto gauss = gauss_legendre_1d<double>(gauss_points_for_degree(order));
  const Eigen::Index n = gauss.points.size();
  const Point lo = box.min();
  const Point size = box.sizes();
  CutVolumeRule rule;
  rule.points.resize(2, n * n);
  rule.weights.resize(n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index q = i + n * j;
      rule.points.col(q) = lo + Point(size.x() * 0.5 * (1.0 + gauss.points(i)), size.y() * 0.5 * (1.0 + gauss.points(j)));
      rule.weights(q) = 0.25 * size.x() * size.y() * gauss.weights(i) * gauss.weights(j);
    }
  }
  return rule;
}

CutVolumeRule triangle_rule(const Triangle& tri, int degree) {
  // x(u, v) = A + u (B - A) + u v (C - B), Jacobian u |(B - A) x (C - B)|.
  const auto gu = gauss_legendre_1d<double>(gauss_points_for_degree(degree + 1));
  const auto gv = gauss_legendre_1d<double>(gauss_points_for_degree(degree));
  const Point& a = tri[0];
  const Point ab = tri[1] - tri[0];
  const Point bc = tri[2] - tri[1];
  const double jac = std::abs(cross(ab, bc));
  const Eigen::Index nu = gu.points.size();
  const Eigen::Index nv = gv.points.size();
  CutVolumeRule rule;
  rule.points.resize(2, nu * nv);
  rule.weights.resize(nu * nv);
  for (Eigen::Index i = 0; i < nu; ++i) {
    const double u = 0.5 * (1.0 + gu.points(i));
    for (Eigen::Index j = 0; j < nv; ++j) {
      const double v = 0.5 * (1.0 + gv.points(j));
      const Eigen::Index q = j + nv * i;
      rule.points.col(q) = a + u * (ab + v * bc);
      rule.weights(q) = 0.25 * gu.weights(i) * gv.weights(j) * u * jac;
    }
  }
  return rule;
}

CutVolumeRule cut_volume_rule(const Box& element, const BoundaryPolygon& poly, int order) {
  const std::vector<PointList> components = clip_polygon_to_box(poly, element);
  if (components.empty()) return {};
  if (std::abs(total_area(components) - element.volume()) <= 1e-13 * element.volume()) {
    return box_rule(element, order);
  }
  return rule_on_components(components, order);
}

CutBoundaryRule cut_boundary_rule(const Box& element, const BoundaryPolygon& poly, int order) {
  const auto gauss = gauss_legendre_1d<double>(order + 1);
  BoundaryAccumulator acc;
  for (Eigen::Index s = 0; s < poly.size(); ++s) {
    const auto [a, b] = poly.segment(s);
    add_segment_piece(a, b, element, gauss, acc);
  }
  return acc.finish();
}

ElementRules build_element_rules(const ActiveMesh& mesh, const BoundaryPolygon& poly, int volume_order,
                                 int boundary_order) {
  const BackgroundGrid& grid = mesh.grid();
  const auto n_active = static_cast<std::size_t>(mesh.num_active());
  ElementRules rules;
  rules.volume.resize(n_active);
  rules.boundary.resize(n_active);

  int current_row = -1;
  PointList strip;
  for (std::size_t k = 0; k < n_active; ++k) {
    const int cell = mesh.active()[k];
    const Box box = grid.cell_box(cell);
    if (mesh.classification(cell) == ElementClass::Inside) {
      rules.volume[k] = box_rule(box, volume_order);
      continue;
    }
    // Active ids are sorted, so rows are visited in order; clip each row strip once.
    const int row = grid.cell_j(cell);
    if (row != current_row) {
      current_row = row;
      strip = clip_half_plane(poly.vertices(), 1, box.min().y(), true);
      if (strip.cols() > 0) strip = clip_half_plane(strip, 1, box.max().y(), false);
    }
    if (strip.cols() < 3) continue;
    rules.volume[k] = rule_on_components(clip_polygon_to_box(strip, box), volume_order);
  }

  const auto gauss = gauss_legendre_1d<double>(boundary_order + 1);
  std::vector<BoundaryAccumulator> acc(n_active);
  for (Eigen::Index s = 0; s < poly.size(); ++s) {
    const auto [a, b] = poly.segment(s);
    for (int cell : cells_near_segment(grid, a, b, 1e-12 * grid.h)) {
      const int k = mesh.active_index(cell);
      if (k < 0) continue;
      add_segment_piece(a, b, grid.cell_box(cell), gauss, acc[static_cast<std::size_t>(k)]);
    }
  }
  for (std::size_t k = 0; k < n_active; ++k) rules.boundary[k] = acc[k].finish();
  return rules;
}

}  // namespace cutfem
