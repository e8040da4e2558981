#pragma once

#include "cutfem/studies.hpp"
#include "cutfem/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <random>
#include <vector>

namespace cutfem::testing {

inline PointList to_points(std::initializer_list<Point> pts) {
  PointList out(2, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index i = 0;
  for (const Point& p : pts) out.col(i++) = p;
  return out;
}

inline BoundaryPolygon box_polygon(double x0, double y0, double x1, double y1) {
  return BoundaryPolygon(to_points({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}));
}

inline BoundaryPolygon regular_polygon(const Point& center, double radius, int n, double phase = 0.0) {
  PointList v(2, n);
  for (int k = 0; k < n; ++k) {
    const double t = phase + 2.0 * M_PI * k / n;
    v.col(k) = center + radius * Point(std::cos(t), std::sin(t));
  }
  return BoundaryPolygon(v);
}

/// Integral of x^a y^b over the polygon by Green's theorem,
/// int x^a y^b dA = closed integral of x^(a+1) y^b / (a+1) dy, with exact Gauss edge sums.
inline double green_monomial_integral(const std::vector<std::pair<Point, Point>>& boundary, int a, int b) {
  // 8-point Gauss-Legendre is exact up to degree 15 along each straight edge.
  static const double xg[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static const double wg[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  double total = 0.0;
  for (const auto& [p, q] : boundary) {
    const double dy = q.y() - p.y();
    for (int k = 0; k < 8; ++k) {
      const Point x = p + 0.5 * (1.0 + xg[k]) * (q - p);
      total += 0.5 * wg[k] * std::pow(x.x(), a + 1) * std::pow(x.y(), b) / (a + 1) * dy;
    }
  }
  return total;
}

/// Oriented boundary of poly intersected with box, built from the polygon edges inside the
/// box and the box edge pieces inside the polygon. Independent of the library clipper.
inline std::vector<std::pair<Point, Point>> intersection_boundary(const BoundaryPolygon& poly, const Box& box) {
  std::vector<std::pair<Point, Point>> out;
  auto inside_poly = [&](const Point& x) {
    bool in = false;
    for (Eigen::Index i = 0; i < poly.size(); ++i) {
      const auto [a, b] = poly.segment(i);
      if ((a.y() > x.y()) != (b.y() > x.y())) {
        const double xi = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
        if (x.x() < xi) in = !in;
      }
    }
    return in;
  };
  // Polygon edges restricted to the box, parameterized clipping.
  for (Eigen::Index i = 0; i < poly.size(); ++i) {
    const auto [a, b] = poly.segment(i);
    double t0 = 0.0, t1 = 1.0;
    const Point d = b - a;
    bool keep = true;
    for (int axis = 0; axis < 2 && keep; ++axis) {
      const double lo = box.min()(axis), hi = box.max()(axis);
      if (d(axis) == 0.0) {
        keep = a(axis) >= lo && a(axis) <= hi;
        continue;
      }
      double s0 = (lo - a(axis)) / d(axis), s1 = (hi - a(axis)) / d(axis);
      if (s0 > s1) std::swap(s0, s1);
      t0 = std::max(t0, s0);
      t1 = std::min(t1, s1);
      if (t0 >= t1) keep = false;
    }
    if (keep) out.emplace_back(a + t0 * d, a + t1 * d);
  }
  // Box edges (counterclockwise) split at polygon crossings; keep pieces inside the polygon.
  const Point c[4] = {box.min(), Point(box.max().x(), box.min().y()), box.max(), Point(box.min().x(), box.max().y())};
  for (int e = 0; e < 4; ++e) {
    const Point p = c[e], q = c[(e + 1) % 4];
    std::vector<double> ts{0.0, 1.0};
    for (Eigen::Index i = 0; i < poly.size(); ++i) {
      const auto [a, b] = poly.segment(i);
      const Point r = q - p, s = b - a;
      const double den = r.x() * s.y() - r.y() * s.x();
      if (den == 0.0) continue;
      const Point w = a - p;
      const double t = (w.x() * s.y() - w.y() * s.x()) / den;
      const double u = (w.x() * r.y() - w.y() * r.x()) / den;
      if (t > 0.0 && t < 1.0 && u >= 0.0 && u <= 1.0) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      if (ts[k + 1] - ts[k] <= 0.0) continue;
      const Point m = p + 0.5 * (ts[k] + ts[k + 1]) * (q - p);
      if (inside_poly(m)) out.emplace_back(p + ts[k] * (q - p), p + ts[k + 1] * (q - p));
    }
  }
  return out;
}

/// Dense extreme eigenvalues of a symmetric sparse matrix.
inline Eigen::VectorXd dense_eigenvalues(const SparseMatrix& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double condition_number(const SparseMatrix& A) {
  const Eigen::VectorXd ev = dense_eigenvalues(A);
  return ev.cwiseAbs().maxCoeff() / ev.cwiseAbs().minCoeff();
}

/// Extreme eigenvalues of an SPD sparse matrix: power iteration for the largest and
/// inverse iteration through a Cholesky factor for the smallest.
inline std::pair<double, double> extreme_eigenvalues_spd(const SparseMatrix& A) {
  Eigen::SimplicialLLT<SparseMatrix> llt(A);
  if (llt.info() != Eigen::Success) return {std::nan(""), std::nan("")};
  auto iterate = [&](auto&& apply) {
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(A.rows(), 1.0, 2.0).normalized();
    double lambda = 0.0;
    for (int it = 0; it < 2000; ++it) {
      Eigen::VectorXd w = apply(v);
      const double next = v.dot(w);
      v = w.normalized();
      if (std::abs(next - lambda) <= 1e-10 * std::abs(next)) return next;
      lambda = next;
    }
    return lambda;
  };
  const double largest = iterate([&](const Eigen::VectorXd& v) { return Eigen::VectorXd(A * v); });
  const double inverse_smallest = iterate([&](const Eigen::VectorXd& v) { return Eigen::VectorXd(llt.solve(v)); });
  return {1.0 / inverse_smallest, largest};
}

/// Nodal interpolant of a global function on the dofs.
template <typename F>
Eigen::VectorXd interpolate(const DofMap& dofs, F&& f) {
  Eigen::VectorXd c(dofs.size());
  for (int i = 0; i < dofs.size(); ++i) c(i) = f(Point(dofs.dof_points().col(i)));
  return c;
}

/// Fitted unit-square configuration: grid lines on x, y = 0, 1.
inline BackgroundGrid fitted_square_grid(int cells_per_unit) {
  const double h = 1.0 / cells_per_unit;
  return {Point(-2.0 * h, -2.0 * h), h, cells_per_unit + 4, cells_per_unit + 4};
}

}  // namespace cutfem::testing
