#pragma once

#include "cutfem/geometry.hpp"
#include "cutfem/grid.hpp"

#include <vector>

namespace cutfem {

enum class ElementClass : unsigned char { Outside, Inside, Cut };

/// Face shared by two grid cells. `first` is the cell with the smaller coordinate
/// along `axis`; the face normal is +axis.
struct GhostFace {
  int first = 0;
  int second = 0;
  Axis axis = Axis::X;

  friend bool operator==(const GhostFace&, const GhostFace&) = default;
};

/// Background cells that intersect the computational domain, with their cut status.
class ActiveMesh {
 public:
  ActiveMesh(BackgroundGrid grid, std::vector<ElementClass> classes);

  const BackgroundGrid& grid() const { return grid_; }
  double h() const { return grid_.h; }

  /// Active cell ids in increasing order.
  const std::vector<int>& active() const { return active_; }
  int num_active() const { return static_cast<int>(active_.size()); }

  ElementClass classification(int cell) const { return classes_[static_cast<std::size_t>(cell)]; }
  bool is_active(int cell) const { return classification(cell) != ElementClass::Outside; }
  /// Position of a cell in active(), or -1.
  int active_index(int cell) const { return active_index_[static_cast<std::size_t>(cell)]; }

  const std::vector<GhostFace>& ghost_faces() const { return ghost_faces_; }
  void set_ghost_faces(std::vector<GhostFace> faces) { ghost_faces_ = std::move(faces); }

 private:
  BackgroundGrid grid_;
  std::vector<ElementClass> classes_;
  std::vector<int> active_;
  std::vector<int> active_index_;
  std::vector<GhostFace> ghost_faces_;
};

/// Classifies every cell against the polygon and fills the ghost-penalty face set.
///
/// A cell is Cut when the polygon boundary passes through its open interior. Cells
/// the boundary does not enter are Inside or excluded according to the even-odd
/// test at their centre, so cells that the boundary only touches along an edge are
/// never active with zero measure.
ActiveMesh classify_elements(const BackgroundGrid& grid, const BoundaryPolygon& poly);

/// Faces between two active cells of which at least one is Cut, sorted by
/// (axis, first cell).
std::vector<GhostFace> ghost_faces(const ActiveMesh& mesh);

/// Ids of the cells whose closed box overlaps the bounding box of segment (a, b),
/// widened by `pad` on every side, clamped to the grid.
std::vector<int> cells_near_segment(const BackgroundGrid& grid, const Point& a, const Point& b, double pad);

/// Liang-Barsky clip of segment (a, b) against a closed box. Returns false when the
/// segment misses the box; otherwise t0 <= t1 bound the inside part.
bool clip_segment_to_box(const Point& a, const Point& b, const Box& box, double& t0, double& t1);

}  // namespace cutfem
