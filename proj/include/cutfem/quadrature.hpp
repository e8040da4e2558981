#pragma once

#include "cutfem/geometry.hpp"
#include "cutfem/mesh.hpp"
#include "cutfem/types.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace cutfem {

template <typename Scalar>
struct QuadRule1D {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> points;   // on [-1, 1]
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1], exact for degree 2n - 1. Nodes are the
/// roots of P_n found by Newton iteration from the Chebyshev-like initial guess.
template <typename Scalar = double>
QuadRule1D<Scalar> gauss_legendre_1d(int n) {
  if (n < 1 || n > 16) throw ContractError("gauss_legendre_1d: n must be in [1, 16]");
  QuadRule1D<Scalar> rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  // Returns P_n(x) and P_n'(x) by the three-term recurrence.
  auto legendre = [n](Scalar x) {
    Scalar p0 = 1;
    Scalar p1 = x;
    for (int m = 2; m <= n; ++m) {
      const Scalar p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / Scalar(m);
      p0 = p1;
      p1 = p2;
    }
    return std::pair<Scalar, Scalar>(p1, n * (x * p1 - p0) / (x * x - 1));
  };
  for (int k = 0; k < (n + 1) / 2; ++k) {
    Scalar x = std::cos(pi * (Scalar(k) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, dpn] = legendre(x);
      const Scalar dx = pn / dpn;
      x -= dx;
      if (std::abs(dx) <= std::numeric_limits<Scalar>::epsilon()) break;
    }
    const Scalar dp = legendre(x).second;
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.points(k) = -x;
    rule.points(n - 1 - k) = x;
    rule.weights(k) = w;
    rule.weights(n - 1 - k) = w;
  }
  if (n % 2 == 1) rule.points(n / 2) = 0;
  return rule;
}

/// Number of Gauss points per direction exact for polynomials of degree `degree`.
inline int gauss_points_for_degree(int degree) { return std::max(1, (degree + 2) / 2); }

struct CutVolumeRule {
  PointList points;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return weights.size(); }
};

struct CutBoundaryRule {
  PointList points;
  Eigen::VectorXd weights;
  PointList normals;

  Eigen::Index size() const { return weights.size(); }
};

using Triangle = std::array<Point, 3>;

/// Tensor Gauss rule on an axis-aligned box, exact for Q_order (degree <= order in
/// each coordinate).
CutVolumeRule box_rule(const Box& box, int order);

/// Collapsed (Duffy) tensor Gauss rule on a triangle, exact for total degree `degree`.
CutVolumeRule triangle_rule(const Triangle& tri, int degree);

/// The intersection of a closed polygon with a box as disjoint simple CCW polygons.
/// The subject may be degenerate (zero-width bridges) as long as its winding number
/// is 0 or 1 everywhere.
std::vector<PointList> clip_polygon_to_box(const PointList& subject, const Box& box);
std::vector<PointList> clip_polygon_to_box(const BoundaryPolygon& poly, const Box& box);

/// Sutherland-Hodgman clip of a closed polygon against the half-plane x_axis >= value
/// (keep_above) or x_axis <= value. Output may be degenerate.
PointList clip_half_plane(const PointList& subject, int axis, double value, bool keep_above);

/// Ear-clipping triangulation of a simple CCW polygon.
std::vector<Triangle> triangulate_polygon(const PointList& polygon);

/// Quadrature on element ∩ domain, exact for Q_order integrands on the element: a
/// tensor rule when the element is inside, otherwise triangle rules of total degree
/// 2 * order on a triangulation of the clipped region.
CutVolumeRule cut_volume_rule(const Box& element, const BoundaryPolygon& poly, int order);

/// Quadrature on the polygon boundary inside the element, exact for the trace of
/// Q_order functions (order + 1 Gauss points per clipped piece). Pieces lying on the
/// element's edge belong to the element on their interior side.
CutBoundaryRule cut_boundary_rule(const Box& element, const BoundaryPolygon& poly, int order);

/// Volume and boundary rules for every active element, indexed by active position.
struct ElementRules {
  std::vector<CutVolumeRule> volume;
  std::vector<CutBoundaryRule> boundary;
};

/// Builds all element rules at once using per-row pre-clipping and segment binning.
ElementRules build_element_rules(const ActiveMesh& mesh, const BoundaryPolygon& poly, int volume_order,
                                 int boundary_order);

}  // namespace cutfem
