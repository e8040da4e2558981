#pragma once

#include "cutfem/grid.hpp"
#include "cutfem/types.hpp"

#include <utility>

namespace cutfem {

/// Exact smooth (or piecewise smooth) domain with an analytic closest-point map.
struct ExactDomain {
  enum class Kind { UnitSquare, Disk };

  Kind kind = Kind::UnitSquare;
  Point center = Point::Zero();
  double radius = 1.0;

  static ExactDomain unit_square() { return {}; }
  static ExactDomain disk(const Point& center, double radius) {
    if (!(radius > 0.0)) {
      throw ContractError("ExactDomain::disk: radius must be positive");
    }
    return {Kind::Disk, center, radius};
  }
};

/// Closed counterclockwise simple polygon; the last vertex connects back to the first.
class BoundaryPolygon {
 public:
  /// Validates the invariants; throws GeometryError when any is violated.
  explicit BoundaryPolygon(PointList vertices);

  const PointList& vertices() const { return vertices_; }
  Eigen::Index size() const { return vertices_.cols(); }
  Point vertex(Eigen::Index i) const { return vertices_.col(i); }
  std::pair<Point, Point> segment(Eigen::Index i) const {
    return {vertices_.col(i), vertices_.col((i + 1) % vertices_.cols())};
  }

  double signed_area() const { return shoelace_area(vertices_); }
  double perimeter() const;
  Box bounding_box() const;

 private:
  PointList vertices_;
};

struct GeometricErrors {
  double delta = 0.0;    // boundary location error
  double delta_n = 0.0;  // boundary normal error
};

struct Projection {
  Point point;
  Point normal;
};

/// True when no two non-adjacent edges of the closed polyline intersect.
bool is_simple_polygon(const PointList& vertices);

/// Even-odd inclusion test (half-open crossing rule).
bool point_in_polygon(const BoundaryPolygon& poly, const Point& x);

/// Unit square boundary sampled uniformly from the corner (0,0), mapped by
/// x -> x + delta cos(5 theta) r_hat with polar coordinates about (0.45, 0.35).
BoundaryPolygon perturb_square_boundary(double delta, int segments_per_side);

/// Oscillation frequency round(5 (h/h0)^(-alpha_n)) of the circle perturbation.
int circle_perturbation_frequency(double alpha_n, double h, double h0);

/// Unit circle sampled at n_vertices angles, mapped by x -> x + delta cos(freq theta) n.
BoundaryPolygon perturb_circle_boundary(double delta, double alpha_n, double h, double h0, int n_vertices);

/// Zero contour of the piecewise linear interpolant of |x - c| - R on the grid's
/// triangulation (every cell split along its lower-left to upper-right diagonal).
BoundaryPolygon extract_levelset_boundary(const ExactDomain& disk, const BackgroundGrid& grid);

/// Closest point on the exact boundary and the outward normal there. Square corners
/// take the normal of the lowest-indexed adjacent edge (bottom, right, top, left).
Projection closest_point(const ExactDomain& domain, const Point& x);

/// Outward normal of the CCW polygon edge a -> b.
Point segment_outward_normal(const Point& a, const Point& b);

/// Samples every vertex and samples_per_segment interior points of each edge.
GeometricErrors measure_geometric_errors(const BoundaryPolygon& poly, const ExactDomain& domain,
                                         int samples_per_segment = 5);

}  // namespace cutfem
