#include "cutfem/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace cutfem {

namespace {

enum class EdgeKind : std::int64_t { Horizontal = 0, Vertical = 1, Diagonal = 2 };

struct GridEdge {
  EdgeKind kind;
  int i;
  int j;
};

class LevelSetGrid {
 public:
  LevelSetGrid(const BackgroundGrid& grid, const ExactDomain& disk) : grid_(grid) {
    values_.resize(static_cast<std::size_t>(grid.nx + 1) * (grid.ny + 1));
    for (int j = 0; j <= grid.ny; ++j) {
      for (int i = 0; i <= grid.nx; ++i) {
        values_[index(i, j)] = (node(i, j) - disk.center).norm() - disk.radius;
      }
    }
  }

  Point node(int i, int j) const { return {grid_.node_x(i), grid_.node_y(j)}; }
  double value(int i, int j) const { return values_[index(i, j)]; }
  // Zero values count as outside so that every node has a strict sign.
  bool inside(int i, int j) const { return value(i, j) < 0.0; }

  std::int64_t key(const GridEdge& e) const {
    return (static_cast<std::int64_t>(e.kind) * (grid_.ny + 1) + e.j) * (grid_.nx + 1) + e.i;
  }

  /// Zero crossing on the edge, always interpolated from its first to its second node.
  Point crossing(const GridEdge& e) const {
    const int i1 = e.kind == EdgeKind::Vertical ? e.i : e.i + 1;
    const int j1 = e.kind == EdgeKind::Horizontal ? e.j : e.j + 1;
    const double f0 = value(e.i, e.j);
    const double f1 = value(i1, j1);
    const double t = f0 / (f0 - f1);
    const Point a = node(e.i, e.j);
    const Point b = node(i1, j1);
    return a + t * (b - a);
  }

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * (grid_.nx + 1) + i; }

  BackgroundGrid grid_;
  std::vector<double> values_;
};

struct Triangle {
  std::array<std::array<int, 2>, 3> nodes;  // CCW
  std::array<GridEdge, 3> edges;            // edge k joins nodes k and k+1
};

}  // namespace

BoundaryPolygon extract_levelset_boundary(const ExactDomain& disk, const BackgroundGrid& grid) {
  if (disk.kind != ExactDomain::Kind::Disk) {
    throw ContractError("extract_levelset_boundary: domain must be a disk");
  }
  if (!(grid.h < disk.radius / 4.0)) {
    throw ContractError("extract_levelset_boundary: grid must resolve the disk (h < radius / 4)");
  }
  const LevelSetGrid ls(grid, disk);
  for (int i = 0; i <= grid.nx; ++i) {
    if (ls.inside(i, 0) || ls.inside(i, grid.ny)) throw ContractError("extract_levelset_boundary: disk leaves grid");
  }
  for (int j = 0; j <= grid.ny; ++j) {
    if (ls.inside(0, j) || ls.inside(grid.nx, j)) throw ContractError("extract_levelset_boundary: disk leaves grid");
  }

  struct Link {
    std::int64_t next;
    Point start;
  };
  std::unordered_map<std::int64_t, Link> links;

  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const GridEdge bottom{EdgeKind::Horizontal, i, j};
      const GridEdge top{EdgeKind::Horizontal, i, j + 1};
      const GridEdge left{EdgeKind::Vertical, i, j};
      const GridEdge right{EdgeKind::Vertical, i + 1, j};
      const GridEdge diag{EdgeKind::Diagonal, i, j};
      const std::array<Triangle, 2> triangles{
          Triangle{{{{i, j}, {i + 1, j}, {i + 1, j + 1}}}, {bottom, right, diag}},
          Triangle{{{{i, j}, {i + 1, j + 1}, {i, j + 1}}}, {diag, top, left}},
      };
      for (const Triangle& tri : triangles) {
        std::array<bool, 3> in{};
        for (int k = 0; k < 3; ++k) in[k] = ls.inside(tri.nodes[k][0], tri.nodes[k][1]);
        if (in[0] == in[1] && in[1] == in[2]) continue;
        // The isolated vertex k differs in sign from the other two.
        int k = 0;
        while (in[k] == in[(k + 1) % 3] || in[k] == in[(k + 2) % 3]) ++k;
        const GridEdge& e_after = tri.edges[k];             // nodes k, k+1
        const GridEdge& e_before = tri.edges[(k + 2) % 3];  // nodes k+2, k
        // Inside must lie to the left of the directed contour segment.
        const GridEdge& from = in[k] ? e_after : e_before;
        const GridEdge& to = in[k] ? e_before : e_after;
        const auto [it, fresh] = links.emplace(ls.key(from), Link{ls.key(to), ls.crossing(from)});
        if (!fresh) throw GeometryError("extract_levelset_boundary: non-manifold zero contour");
      }
    }
  }
  if (links.empty()) throw GeometryError("extract_levelset_boundary: empty zero contour");

  // Chain starting from the smallest key so the output is independent of hash order.
  std::int64_t start = links.begin()->first;
  for (const auto& [key, link] : links) start = std::min(start, key);

  std::vector<Point> chain;
  chain.reserve(links.size());
  std::size_t visited = 0;
  std::int64_t current = start;
  do {
    const auto it = links.find(current);
    if (it == links.end()) throw GeometryError("extract_levelset_boundary: open zero contour");
    const Point& p = it->second.start;
    if (chain.empty() || (p - chain.back()).norm() > 1e-14 * grid.h) chain.push_back(p);
    current = it->second.next;
    ++visited;
  } while (current != start && visited <= links.size());
  if (current != start) throw GeometryError("extract_levelset_boundary: open zero contour");
  if (visited != links.size()) {
    throw GeometryError("extract_levelset_boundary: zero contour has multiple components");
  }
  while (chain.size() > 1 && (chain.front() - chain.back()).norm() <= 1e-14 * grid.h) chain.pop_back();

  PointList vertices(2, static_cast<Eigen::Index>(chain.size()));
  for (std::size_t n = 0; n < chain.size(); ++n) vertices.col(static_cast<Eigen::Index>(n)) = chain[n];
  return BoundaryPolygon(std::move(vertices));
}

}  // namespace cutfem
