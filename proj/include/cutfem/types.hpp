#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <stdexcept>

namespace cutfem {

using Point = Eigen::Vector2d;
using PointList = Eigen::Matrix2Xd;
using Box = Eigen::AlignedBox2d;

enum class Axis { X = 0, Y = 1 };

/// Value and gradient of a scalar field at one point.
struct ValueGradient {
  double value = 0.0;
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition of a public operation.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Twice the signed area of the triangle (a, b, c); positive when counterclockwise.
inline double orient(const Point& a, const Point& b, const Point& c) { return cross(b - a, c - a); }

/// Signed shoelace area of a closed polygon stored column-wise.
template <typename Derived>
typename Derived::Scalar shoelace_area(const Eigen::MatrixBase<Derived>& vertices) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = vertices.cols();
  Scalar twice = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = (i + 1) % n;
    twice += vertices(0, i) * vertices(1, j) - vertices(0, j) * vertices(1, i);
  }
  return twice / Scalar(2);
}

}  // namespace cutfem
