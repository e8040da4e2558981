#include "cutfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

namespace cutfem {

namespace {

std::vector<Point> to_ring(const PointList& poly) {
  std::vector<Point> ring;
  ring.reserve(static_cast<std::size_t>(poly.cols()));
  for (Eigen::Index i = 0; i < poly.cols(); ++i) {
    const Point p = poly.col(i);
    if (ring.empty() || p != ring.back()) ring.push_back(p);
  }
  while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

PointList to_points(const std::vector<Point>& ring) {
  PointList out(2, static_cast<Eigen::Index>(ring.size()));
  for (std::size_t i = 0; i < ring.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = ring[i];
  return out;
}

struct Edge {
  Point from;
  Point to;
};

enum Side { kBottom = 0, kRight = 1, kTop = 2, kLeft = 3, kNone = 4 };

Side side_of(const Point& a, const Point& b, const Box& box) {
  if (a.y() == box.min().y() && b.y() == box.min().y()) return kBottom;
  if (a.x() == box.max().x() && b.x() == box.max().x()) return kRight;
  if (a.y() == box.max().y() && b.y() == box.max().y()) return kTop;
  if (a.x() == box.min().x() && b.x() == box.min().x()) return kLeft;
  return kNone;
}

// Coordinate along a side and whether increasing it runs counterclockwise.
double side_param(Side side, const Point& p) { return (side == kBottom || side == kTop) ? p.x() : p.y(); }
bool side_ccw_increasing(Side side) { return side == kBottom || side == kRight; }

Point side_point(Side side, double s, const Box& box) {
  switch (side) {
    case kBottom: return {s, box.min().y()};
    case kRight: return {box.max().x(), s};
    case kTop: return {s, box.max().y()};
    default: return {box.min().x(), s};
  }
}

// Ccw angle in [0, 2 pi) from r to d; turning back along r scores lowest.
double turn_score(const Point& r, const Point& d) {
  double theta = std::atan2(cross(r, d), r.dot(d));
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  return theta;
}

// Splits a (possibly degenerate) clipped ring into simple CCW components. Edges that
// run along the box boundary are replaced by their net coverage so that zero-width
// bridges cancel; the remaining edges are re-linked into minimal cycles.
std::vector<PointList> split_components(const std::vector<Point>& ring, const Box& box) {
  std::vector<PointList> result;
  if (ring.size() < 3) return result;

  std::vector<Edge> edges;
  struct SideEdge {
    double s0;
    double s1;
    int sign;
  };
  std::array<std::vector<SideEdge>, 4> on_side;

  for (std::size_t k = 0; k < ring.size(); ++k) {
    const Point& a = ring[k];
    const Point& b = ring[(k + 1) % ring.size()];
    const Side side = side_of(a, b, box);
    if (side == kNone) {
      edges.push_back({a, b});
      continue;
    }
    const double s0 = side_param(side, a);
    const double s1 = side_param(side, b);
    const bool increasing = s1 > s0;
    const int sign = increasing == side_ccw_increasing(side) ? 1 : -1;
    on_side[side].push_back({std::min(s0, s1), std::max(s0, s1), sign});
  }

  for (int side = 0; side < 4; ++side) {
    const auto& list = on_side[static_cast<std::size_t>(side)];
    if (list.empty()) continue;
    std::vector<double> breaks;
    for (const auto& e : list) {
      breaks.push_back(e.s0);
      breaks.push_back(e.s1);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      int net = 0;
      for (const auto& e : list) {
        if (e.s0 <= breaks[k] && breaks[k + 1] <= e.s1) net += e.sign;
      }
      if (net == 0) continue;
      if (net != 1) throw QuadratureError("clip_polygon_to_box: inconsistent boundary coverage");
      const auto s = static_cast<Side>(side);
      Point p = side_point(s, breaks[k], box);
      Point q = side_point(s, breaks[k + 1], box);
      if (!side_ccw_increasing(s)) std::swap(p, q);
      edges.push_back({p, q});
    }
  }

  std::map<std::pair<double, double>, std::vector<std::size_t>> outgoing;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    outgoing[{edges[e].from.x(), edges[e].from.y()}].push_back(e);
  }
  std::vector<bool> used(edges.size(), false);
  const double area_floor = 1e-14 * box.volume();

  for (std::size_t first = 0; first < edges.size(); ++first) {
    if (used[first]) continue;
    std::vector<Point> cycle;
    std::size_t current = first;
    const Point start = edges[first].from;
    while (true) {
      used[current] = true;
      cycle.push_back(edges[current].from);
      const Point v = edges[current].to;
      if (v == start) break;
      const auto it = outgoing.find({v.x(), v.y()});
      if (it == outgoing.end()) throw QuadratureError("clip_polygon_to_box: open boundary chain");
      const Point back = edges[current].from - v;
      std::size_t best = edges.size();
      double best_score = -1.0;
      for (std::size_t cand : it->second) {
        if (used[cand]) continue;
        const double score = turn_score(back, edges[cand].to - v);
        if (score > best_score) {
          best_score = score;
          best = cand;
        }
      }
      if (best == edges.size()) throw QuadratureError("clip_polygon_to_box: open boundary chain");
      current = best;
    }
    PointList poly = to_points(cycle);
    const double area = shoelace_area(poly);
    if (area < -area_floor) throw QuadratureError("clip_polygon_to_box: clockwise component");
    if (area > area_floor && poly.cols() >= 3) result.push_back(std::move(poly));
  }
  return result;
}

}  // namespace

PointList clip_half_plane(const PointList& subject, int axis, double value, bool keep_above) {
  auto inside = [&](const Point& p) { return keep_above ? p(axis) >= value : p(axis) <= value; };
  auto intersect = [&](const Point& s, const Point& e) {
    const double t = (value - s(axis)) / (e(axis) - s(axis));
    Point p = s + t * (e - s);
    p(axis) = value;
    return p;
  };
  const Eigen::Index n = subject.cols();
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n) + 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point cur = subject.col(i);
    const Point prev = subject.col((i + n - 1) % n);
    const bool cur_in = inside(cur);
    const bool prev_in = inside(prev);
    if (cur_in) {
      if (!prev_in) out.push_back(intersect(prev, cur));
      out.push_back(cur);
    } else if (prev_in) {
      out.push_back(intersect(prev, cur));
    }
  }
  return to_points(out);
}

std::vector<PointList> clip_polygon_to_box(const PointList& subject, const Box& box) {
  PointList r = clip_half_plane(subject, 0, box.min().x(), true);
  if (r.cols() > 0) r = clip_half_plane(r, 0, box.max().x(), false);
  if (r.cols() > 0) r = clip_half_plane(r, 1, box.min().y(), true);
  if (r.cols() > 0) r = clip_half_plane(r, 1, box.max().y(), false);
  return split_components(to_ring(r), box);
}

std::vector<PointList> clip_polygon_to_box(const BoundaryPolygon& poly, const Box& box) {
  return clip_polygon_to_box(poly.vertices(), box);
}

std::vector<Triangle> triangulate_polygon(const PointList& polygon) {
  std::vector<Point> ring = to_ring(polygon);
  if (ring.size() < 3) throw QuadratureError("triangulate_polygon: fewer than 3 distinct vertices");
  const PointList pts = to_points(ring);
  const double diameter = (pts.rowwise().maxCoeff() - pts.rowwise().minCoeff()).norm();
  if (!(shoelace_area(pts) > 1e-14 * diameter * diameter)) {
    throw QuadratureError("triangulate_polygon: degenerate polygon");
  }

  std::vector<Triangle> triangles;
  triangles.reserve(ring.size());
  auto next = [&](std::size_t i) { return (i + 1) % ring.size(); };
  auto prev = [&](std::size_t i) { return (i + ring.size() - 1) % ring.size(); };

  while (ring.size() > 3) {
    // Drop vertices on a straight line or at zero-width spikes.
    bool removed = false;
    for (std::size_t i = 0; i < ring.size() && ring.size() > 3; ++i) {
      const Point& a = ring[prev(i)];
      const Point& b = ring[i];
      const Point& c = ring[next(i)];
      if (std::abs(orient(a, b, c)) <= 1e-14 * (b - a).norm() * (c - b).norm()) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
        break;
      }
    }
    if (removed) continue;

    bool clipped = false;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point& a = ring[prev(i)];
      const Point& b = ring[i];
      const Point& c = ring[next(i)];
      if (orient(a, b, c) <= 0.0) continue;
      bool ear = true;
      for (std::size_t k = 0; k < ring.size() && ear; ++k) {
        if (k == prev(i) || k == i || k == next(i)) continue;
        const Point& p = ring[k];
        if (p == a || p == b || p == c) continue;
        if (orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0) ear = false;
      }
      if (!ear) continue;
      triangles.push_back({a, b, c});
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw QuadratureError("triangulate_polygon: no ear found (polygon not simple)");
  }
  if (ring.size() == 3 && orient(ring[0], ring[1], ring[2]) > 0.0) {
    triangles.push_back({ring[0], ring[1], ring[2]});
  }
  return triangles;
}

}  // namespace cutfem
