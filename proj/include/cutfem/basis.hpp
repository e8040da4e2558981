#pragma once

#include "cutfem/types.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>

namespace cutfem {

/// Tensor-product Lagrange basis of degree p on the reference square [0,1]^2 with
/// equispaced nodes. Local function a + (p+1) b is L_a(x) L_b(y).
template <typename Scalar>
class TensorLagrangeBasis {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
  using Gradients = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

  explicit TensorLagrangeBasis(int degree) : degree_(degree) {
    if (degree < 1 || degree > 3) throw ContractError("TensorLagrangeBasis: degree must be 1, 2 or 3");
    const int n = degree + 1;
    nodes_.resize(n);
    for (int a = 0; a < n; ++a) nodes_(a) = Scalar(a) / Scalar(degree);
    // Monomial coefficients of each 1D cardinal function: column a holds L_a.
    coefficients_ = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      Vector poly = Vector::Zero(n);
      poly(0) = 1;
      Scalar denom = 1;
      for (int m = 0; m < n; ++m) {
        if (m == a) continue;
        Vector shifted = Vector::Zero(n);
        for (int k = n - 1; k >= 1; --k) shifted(k) = poly(k - 1);
        poly = shifted - nodes_(m) * poly;
        denom *= nodes_(a) - nodes_(m);
      }
      coefficients_.col(a) = poly / denom;
    }
  }

  int degree() const { return degree_; }
  int num_functions() const { return (degree_ + 1) * (degree_ + 1); }
  const Vector& nodes_1d() const { return nodes_; }

  /// Reference position of local node `local`.
  Vector2 node(int local) const { return {nodes_(local % (degree_ + 1)), nodes_(local / (degree_ + 1))}; }

  /// d^deriv/dt^deriv of the 1D cardinal function a at t.
  Scalar shape_1d(int a, Scalar t, int deriv) const {
    const int n = degree_ + 1;
    Scalar result = 0;
    for (int k = n - 1; k >= deriv; --k) {
      Scalar factor = 1;
      for (int m = 0; m < deriv; ++m) factor *= Scalar(k - m);
      result = result * t + factor * coefficients_(k, a);
    }
    return result;
  }

  /// All 1D cardinal functions' deriv-th derivatives at t.
  Vector shape_1d_all(Scalar t, int deriv) const {
    Vector out(degree_ + 1);
    for (int a = 0; a <= degree_; ++a) out(a) = shape_1d(a, t, deriv);
    return out;
  }

  /// Values and physical gradients at a reference point of an element of size h.
  void evaluate(const Vector2& ref, Scalar h, Vector& values, Gradients& gradients) const {
    const int n = degree_ + 1;
    const Vector vx = shape_1d_all(ref.x(), 0);
    const Vector vy = shape_1d_all(ref.y(), 0);
    const Vector dx = shape_1d_all(ref.x(), 1);
    const Vector dy = shape_1d_all(ref.y(), 1);
    values.resize(n * n);
    gradients.resize(2, n * n);
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) {
        const int i = a + n * b;
        values(i) = vx(a) * vy(b);
        gradients(0, i) = dx(a) * vy(b) / h;
        gradients(1, i) = vx(a) * dy(b) / h;
      }
    }
  }

  /// j-th physical partial derivative along one axis of every local function.
  Vector axis_derivative(const Vector2& ref, Axis axis, int j, Scalar h) const {
    if (j < 0 || j > degree_) {
      throw ContractError("axis_derivative: order " + std::to_string(j) + " outside [0, p]");
    }
    const int n = degree_ + 1;
    const bool along_x = axis == Axis::X;
    const Vector fx = shape_1d_all(ref.x(), along_x ? j : 0);
    const Vector fy = shape_1d_all(ref.y(), along_x ? 0 : j);
    const Scalar scale = Scalar(1) / std::pow(h, j);
    Vector out(n * n);
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) out(a + n * b) = fx(a) * fy(b) * scale;
    }
    return out;
  }

 private:
  int degree_;
  Vector nodes_;
  Matrix coefficients_;
};

using QpBasis = TensorLagrangeBasis<double>;

struct BasisValues {
  Eigen::VectorXd values;
  Eigen::Matrix2Xd gradients;
};

inline BasisValues eval_basis(const QpBasis& basis, const Point& ref, double h) {
  BasisValues out;
  basis.evaluate(ref, h, out.values, out.gradients);
  return out;
}

inline Eigen::VectorXd eval_axis_derivative(const QpBasis& basis, const Point& ref, Axis axis, int j, double h) {
  return basis.axis_derivative(ref, axis, j, h);
}

}  // namespace cutfem
