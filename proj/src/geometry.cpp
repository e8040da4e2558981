#include "cutfem/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace cutfem {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
         p.y() <= std::max(a.y(), b.y());
}

// Closed-segment intersection test.
bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o1 = sign_of(orient(a, b, c));
  const int o2 = sign_of(orient(a, b, d));
  const int o3 = sign_of(orient(c, d, a));
  const int o4 = sign_of(orient(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

const Point kSquarePerturbationCenter(0.45, 0.35);

}  // namespace

BoundaryPolygon::BoundaryPolygon(PointList vertices) : vertices_(std::move(vertices)) {
  const Eigen::Index n = vertices_.cols();
  if (n < 3) {
    throw GeometryError("BoundaryPolygon: at least 3 vertices required");
  }
  if (!vertices_.allFinite()) {
    throw GeometryError("BoundaryPolygon: non-finite vertex");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (vertices_.col(i) == vertices_.col((i + 1) % n)) {
      throw GeometryError("BoundaryPolygon: repeated consecutive vertex at index " + std::to_string(i));
    }
  }
  if (!(signed_area() > 0.0)) {
    throw GeometryError("BoundaryPolygon: vertices must be ordered counterclockwise");
  }
  if (!is_simple_polygon(vertices_)) {
    throw GeometryError("BoundaryPolygon: polygon is self-intersecting");
  }
}

double BoundaryPolygon::perimeter() const {
  double total = 0.0;
  for (Eigen::Index i = 0; i < size(); ++i) {
    const auto [a, b] = segment(i);
    total += (b - a).norm();
  }
  return total;
}

Box BoundaryPolygon::bounding_box() const {
  return Box(vertices_.rowwise().minCoeff(), vertices_.rowwise().maxCoeff());
}

bool is_simple_polygon(const PointList& v) {
  const Eigen::Index n = v.cols();
  if (n < 3) return false;

  // Spatial hash of edges; only edges sharing a bucket are tested pairwise.
  const Point lo = v.rowwise().minCoeff();
  const Point hi = v.rowwise().maxCoeff();
  const double extent = std::max((hi - lo).maxCoeff(), 1e-300);
  const int buckets = static_cast<int>(std::clamp(std::sqrt(static_cast<double>(n)), 1.0, 1024.0));
  const double cell = extent / buckets * (1.0 + 1e-12);
  std::vector<std::vector<Eigen::Index>> grid(static_cast<std::size_t>(buckets) * buckets);
  auto bucket = [&](double c, double origin) {
    return std::clamp(static_cast<int>(std::floor((c - origin) / cell)), 0, buckets - 1);
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point a = v.col(i);
    const Point b = v.col((i + 1) % n);
    const int i0 = bucket(std::min(a.x(), b.x()), lo.x());
    const int i1 = bucket(std::max(a.x(), b.x()), lo.x());
    const int j0 = bucket(std::min(a.y(), b.y()), lo.y());
    const int j1 = bucket(std::max(a.y(), b.y()), lo.y());
    for (int j = j0; j <= j1; ++j) {
      for (int k = i0; k <= i1; ++k) {
        grid[static_cast<std::size_t>(j) * buckets + k].push_back(i);
      }
    }
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    // Adjacent edges may only share their common vertex.
    const Point a = v.col(i);
    const Point b = v.col((i + 1) % n);
    const Point c = v.col((i + 2) % n);
    if (orient(a, b, c) == 0.0 && (b - a).dot(c - b) < 0.0) return false;
  }

  for (const auto& edges : grid) {
    for (std::size_t s = 0; s < edges.size(); ++s) {
      for (std::size_t t = s + 1; t < edges.size(); ++t) {
        const Eigen::Index e = edges[s];
        const Eigen::Index f = edges[t];
        const Eigen::Index diff = std::abs(e - f);
        if (diff == 1 || diff == n - 1) continue;
        if (segments_intersect(v.col(e), v.col((e + 1) % n), v.col(f), v.col((f + 1) % n))) {
          return false;
        }
      }
    }
  }
  return true;
}

bool point_in_polygon(const BoundaryPolygon& poly, const Point& x) {
  bool inside = false;
  const PointList& v = poly.vertices();
  const Eigen::Index n = v.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point a = v.col(i);
    const Point b = v.col((i + 1) % n);
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xi = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x.x() < xi) inside = !inside;
    }
  }
  return inside;
}

BoundaryPolygon perturb_square_boundary(double delta, int segments_per_side) {
  if (!(delta >= 0.0)) throw ContractError("perturb_square_boundary: delta must be >= 0");
  if (segments_per_side < 16) throw ContractError("perturb_square_boundary: segments_per_side must be >= 16");

  const int n = segments_per_side;
  PointList vertices(2, 4 * n);
  for (int side = 0; side < 4; ++side) {
    for (int k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / n;
      Point x;
      switch (side) {
        case 0: x = {t, 0.0}; break;
        case 1: x = {1.0, t}; break;
        case 2: x = {1.0 - t, 1.0}; break;
        default: x = {0.0, 1.0 - t}; break;
      }
      if (delta > 0.0) {
        const Point r = x - kSquarePerturbationCenter;
        const double theta = std::atan2(r.y(), r.x());
        x += delta * std::cos(5.0 * theta) * r.normalized();
      }
      vertices.col(side * n + k) = x;
    }
  }
  try {
    return BoundaryPolygon(std::move(vertices));
  } catch (const GeometryError& e) {
    throw GeometryError(std::string("perturb_square_boundary: ") + e.what());
  }
}

int circle_perturbation_frequency(double alpha_n, double h, double h0) {
  if (!(h > 0.0) || !(h0 > 0.0)) throw ContractError("circle_perturbation_frequency: h and h0 must be positive");
  return static_cast<int>(std::round(5.0 * std::pow(h / h0, -alpha_n)));
}

BoundaryPolygon perturb_circle_boundary(double delta, double alpha_n, double h, double h0, int n_vertices) {
  if (!(delta >= 0.0)) throw ContractError("perturb_circle_boundary: delta must be >= 0");
  const int freq = circle_perturbation_frequency(alpha_n, h, h0);
  if (n_vertices < 16 * std::max(freq, 1)) {
    throw ContractError("perturb_circle_boundary: n_vertices must be >= 16 * frequency (" +
                        std::to_string(16 * freq) + ")");
  }
  PointList vertices(2, n_vertices);
  for (int k = 0; k < n_vertices; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_vertices;
    const double r = 1.0 + delta * std::cos(freq * theta);
    vertices.col(k) = Point(r * std::cos(theta), r * std::sin(theta));
  }
  try {
    return BoundaryPolygon(std::move(vertices));
  } catch (const GeometryError& e) {
    throw GeometryError(std::string("perturb_circle_boundary: ") + e.what());
  }
}

Projection closest_point(const ExactDomain& domain, const Point& x) {
  if (domain.kind == ExactDomain::Kind::Disk) {
    const Point d = x - domain.center;
    const double r = d.norm();
    if (r == 0.0) throw GeometryError("closest_point: projection undefined at the disk center");
    const Point n = d / r;
    return {domain.center + domain.radius * n, n};
  }

  static const std::array<Point, 4> normals{Point(0, -1), Point(1, 0), Point(0, 1), Point(-1, 0)};
  const bool outside = x.x() < 0.0 || x.x() > 1.0 || x.y() < 0.0 || x.y() > 1.0;
  if (!outside) {
    const std::array<double, 4> dist{x.y(), 1.0 - x.x(), 1.0 - x.y(), x.x()};
    const auto side = static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
    Point q = x;
    switch (side) {
      case 0: q.y() = 0.0; break;
      case 1: q.x() = 1.0; break;
      case 2: q.y() = 1.0; break;
      default: q.x() = 0.0; break;
    }
    return {q, normals[side]};
  }
  // Outside: clamp, and take the first violated edge in (bottom, right, top, left) order.
  const Point q(std::clamp(x.x(), 0.0, 1.0), std::clamp(x.y(), 0.0, 1.0));
  std::size_t side = 3;
  if (x.y() < 0.0) {
    side = 0;
  } else if (x.x() > 1.0) {
    side = 1;
  } else if (x.y() > 1.0) {
    side = 2;
  }
  return {q, normals[side]};
}

Point segment_outward_normal(const Point& a, const Point& b) {
  const Point t = b - a;
  const double len = t.norm();
  if (!(len > 0.0)) throw GeometryError("segment_outward_normal: degenerate segment");
  return Point(t.y(), -t.x()) / len;
}

GeometricErrors measure_geometric_errors(const BoundaryPolygon& poly, const ExactDomain& domain,
                                         int samples_per_segment) {
  if (samples_per_segment < 1) throw ContractError("measure_geometric_errors: samples_per_segment must be >= 1");
  GeometricErrors errors;
  for (Eigen::Index i = 0; i < poly.size(); ++i) {
    const auto [a, b] = poly.segment(i);
    const Point n_delta = segment_outward_normal(a, b);
    errors.delta = std::max(errors.delta, (a - closest_point(domain, a).point).norm());
    for (int k = 1; k <= samples_per_segment; ++k) {
      const double t = static_cast<double>(k) / (samples_per_segment + 1);
      const Point x = a + t * (b - a);
      const Projection proj = closest_point(domain, x);
      errors.delta = std::max(errors.delta, (x - proj.point).norm());
      errors.delta_n = std::max(errors.delta_n, (proj.normal - n_delta).norm());
    }
  }
  return errors;
}

}  // namespace cutfem
