#include "cutfem/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <limits>

namespace cutfem {

namespace {

// b - A x accumulated in extended precision. In double the rounding of the product
// alone is of the order of the 1e-12 residual target on fine meshes.
Eigen::VectorXd residual(const SparseSystem& system, const Eigen::VectorXd& x) {
  std::vector<long double> r(system.rhs.data(), system.rhs.data() + system.rhs.size());
  const SparseMatrix& A = system.matrix;
  for (Eigen::Index k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      r[static_cast<std::size_t>(it.row())] -= static_cast<long double>(it.value()) * x(it.col());
    }
  }
  Eigen::VectorXd out(system.rhs.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = static_cast<double>(r[static_cast<std::size_t>(i)]);
  return out;
}

double relative_residual(const SparseSystem& system, const Eigen::VectorXd& x) {
  const double bnorm = system.rhs.norm();
  const double r = residual(system, x).norm();
  return bnorm > 0.0 ? r / bnorm : r;
}

std::string format_residual(double r) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << r;
  return s.str();
}

}  // namespace

Eigen::VectorXd solve_spd(const SparseSystem& system, double tolerance) {
  const auto n = system.matrix.rows();
  if (system.matrix.cols() != n || system.rhs.size() != n) {
    throw ContractError("solve_spd: dimension mismatch");
  }
  if (n == 0) return {};
  Eigen::SimplicialLLT<SparseMatrix> llt(system.matrix);
  if (llt.info() != Eigen::Success) throw SolverError("solve_spd: Cholesky factorization failed (matrix not SPD)");
  Eigen::VectorXd x = llt.solve(system.rhs);
  if (llt.info() != Eigen::Success || !x.allFinite()) throw SolverError("solve_spd: triangular solve failed");
  for (int sweep = 0; sweep < 3 && relative_residual(system, x) > tolerance; ++sweep) {
    x += llt.solve(residual(system, x));
  }
  const double residual = relative_residual(system, x);
  if (!(residual <= tolerance)) {
    throw SolverError("solve_spd: relative residual " + format_residual(residual) + " above tolerance");
  }
  return x;
}

SymmetricSolve solve_symmetric(const SparseSystem& system, double tolerance) {
  try {
    return {solve_spd(system, tolerance), true};
  } catch (const SolverError&) {
  }
  Eigen::SparseLU<SparseMatrix> lu;
  lu.analyzePattern(system.matrix);
  lu.factorize(system.matrix);
  if (lu.info() != Eigen::Success) throw SolverError("solve_symmetric: LU factorization failed: " + lu.lastErrorMessage());
  Eigen::VectorXd x = lu.solve(system.rhs);
  for (int sweep = 0; sweep < 3 && relative_residual(system, x) > tolerance; ++sweep) {
    x += lu.solve(residual(system, x));
  }
  const double residual = relative_residual(system, x);
  if (!(residual <= tolerance)) {
    throw SolverError("solve_symmetric: relative residual " + format_residual(residual) + " above tolerance");
  }
  return {std::move(x), false};
}

double galerkin_residual(const SparseSystem& system, const Eigen::VectorXd& x) {
  const double bnorm = system.rhs.norm();
  const double r = residual(system, x).lpNorm<Eigen::Infinity>();
  return r / std::max(bnorm, std::numeric_limits<double>::min());
}

double symmetry_error(const SparseMatrix& matrix) {
  const SparseMatrix transpose = matrix.transpose();
  const SparseMatrix diff = matrix - transpose;
  double amax = 0.0;
  double dmax = 0.0;
  for (Eigen::Index k = 0; k < matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) amax = std::max(amax, std::abs(it.value()));
  }
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
  }
  return amax > 0.0 ? dmax / amax : dmax;
}

}  // namespace cutfem
