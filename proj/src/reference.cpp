#include "cutfem/reference.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cutfem {

namespace {

// sinh(a s) / sinh(a) and cosh(a s) / sinh(a) for a > 0, s in [0, 1], without overflow.
double sinh_ratio(double a, double s) { return (std::exp(a * (s - 1.0)) - std::exp(-a * (s + 1.0))) / -std::expm1(-2.0 * a); }
double cosh_ratio(double a, double s) { return (std::exp(a * (s - 1.0)) + std::exp(-a * (s + 1.0))) / -std::expm1(-2.0 * a); }

}  // namespace

ValueGradient series_solution(const Point& x, int n_terms) {
  if (n_terms < 1) throw ContractError("series_solution: n_terms must be >= 1, got " + std::to_string(n_terms));
  constexpr double pi = std::numbers::pi;
  const double px = x.x();
  const double py = x.y();
  ValueGradient out;
  out.value = 0.25 * (px * (1.0 - px) + py * (1.0 - py));
  out.gradient = Point(0.25 * (1.0 - 2.0 * px), 0.25 * (1.0 - 2.0 * py));
  // Small terms last so the sum loses as little as possible.
  double value = 0.0;
  Point grad = Point::Zero();
  for (int k = n_terms - 1; k >= 0; --k) {
    const int n = 2 * k + 1;
    const double a = n * pi;
    const double c = 2.0 / (pi * pi * pi * n * n * n);
    const double sx = sinh_ratio(a, 1.0 - px) + sinh_ratio(a, px);
    const double sy = sinh_ratio(a, 1.0 - py) + sinh_ratio(a, py);
    const double dsx = a * (cosh_ratio(a, px) - cosh_ratio(a, 1.0 - px));
    const double dsy = a * (cosh_ratio(a, py) - cosh_ratio(a, 1.0 - py));
    const double sin_x = std::sin(a * px);
    const double sin_y = std::sin(a * py);
    const double cos_x = std::cos(a * px);
    const double cos_y = std::cos(a * py);
    value += c * (sy * sin_x + sx * sin_y);
    grad += c * Point(sy * a * cos_x + dsx * sin_y, dsy * sin_x + sx * a * cos_y);
  }
  out.value -= value;
  out.gradient -= grad;
  return out;
}

ValueGradient disk_solution(const Point& x) { return {0.25 * (1.0 - x.squaredNorm()), -0.5 * x}; }

ReferenceSolution ReferenceSolution::square_series(int n_terms) {
  if (n_terms < 1) throw ContractError("ReferenceSolution: n_terms must be >= 1");
  ReferenceSolution r;
  r.kind_ = Kind::SquareSeries;
  r.n_terms_ = n_terms;
  return r;
}

ReferenceSolution ReferenceSolution::disk_quadratic() { return {}; }

ReferenceSolution ReferenceSolution::custom(std::function<ValueGradient(const Point&)> fn) {
  if (!fn) throw ContractError("ReferenceSolution::custom: empty function");
  ReferenceSolution r;
  r.kind_ = Kind::Custom;
  r.fn_ = std::move(fn);
  return r;
}

ValueGradient ReferenceSolution::operator()(const Point& x) const {
  switch (kind_) {
    case Kind::DiskQuadratic: return disk_solution(x);
    case Kind::Custom: return fn_(x);
    case Kind::SquareSeries: break;
  }
  // Distance outside the square along each axis, with the mirrored coordinate.
  const auto outside = [](double t, double& mirrored, double& sign) {
    if (t < 0.0) {
      mirrored = -t;
      sign = -1.0;
      return -t;
    }
    if (t > 1.0) {
      mirrored = 2.0 - t;
      sign = 1.0;
      return t - 1.0;
    }
    mirrored = t;
    sign = 0.0;
    return 0.0;
  };
  double mx = 0.0;
  double my = 0.0;
  double sgx = 0.0;
  double sgy = 0.0;
  const double dx = outside(x.x(), mx, sgx);
  const double dy = outside(x.y(), my, sgy);
  if (dx == 0.0 && dy == 0.0) return series_solution(x, n_terms_);
  if (dx > 0.0 && dy > 0.0) {
    // Beyond a corner the solution is continued by the sum of the two side terms.
    return {-dx * dx - dy * dy, Point(-2.0 * dx * sgx, -2.0 * dy * sgy)};
  }
  const ValueGradient inner = series_solution(Point(mx, my), n_terms_);
  ValueGradient out;
  if (dx > 0.0) {
    out.value = -dx * dx - inner.value;
    out.gradient = Point(-2.0 * dx * sgx + inner.gradient.x(), -inner.gradient.y());
  } else {
    out.value = -dy * dy - inner.value;
    out.gradient = Point(-inner.gradient.x(), -2.0 * dy * sgy + inner.gradient.y());
  }
  return out;
}

}  // namespace cutfem
