#pragma once

#include "cutfem/types.hpp"

#include <functional>

namespace cutfem {

/// Truncated series solution of -Laplace(u) = 1 on the unit square with u = 0 on the
/// boundary, summed over the first n_terms odd frequencies. Valid on the closed square.
ValueGradient series_solution(const Point& x, int n_terms);

/// u = (1 - x^2 - y^2) / 4, the solution on the unit disk.
ValueGradient disk_solution(const Point& x);

/// Exact solution with a globally defined extension, used for the error norms.
class ReferenceSolution {
 public:
  enum class Kind { SquareSeries, DiskQuadratic, Custom };

  /// Outside the unit square the series is continued by odd reflection across the
  /// nearest side (u(-x, y) -> -x^2 - u(x, y)), which keeps -Laplace(u) = 1.
  static ReferenceSolution square_series(int n_terms);
  static ReferenceSolution disk_quadratic();
  static ReferenceSolution custom(std::function<ValueGradient(const Point&)> fn);

  Kind kind() const { return kind_; }
  int n_terms() const { return n_terms_; }
  ValueGradient operator()(const Point& x) const;

 private:
  Kind kind_ = Kind::DiskQuadratic;
  int n_terms_ = 0;
  std::function<ValueGradient(const Point&)> fn_;
};

}  // namespace cutfem
