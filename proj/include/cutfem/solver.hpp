#pragma once

#include "cutfem/assembly.hpp"

namespace cutfem {

/// Sparse Cholesky solve of an SPD system. Throws SolverError when the factorization
/// fails or the relative residual stays above `tolerance`.
Eigen::VectorXd solve_spd(const SparseSystem& system, double tolerance = 1e-12);

struct SymmetricSolve {
  Eigen::VectorXd x;
  bool positive_definite = true;  // false when the Cholesky factorization broke down
};

/// Cholesky solve that falls back to a pivoted sparse LU when the symmetric matrix is
/// not positive definite. The residual contract of solve_spd still applies.
SymmetricSolve solve_symmetric(const SparseSystem& system, double tolerance = 1e-12);

/// max_i |(A x - b)_i| / max(||b||, tiny), the Galerkin residual of a computed solution.
double galerkin_residual(const SparseSystem& system, const Eigen::VectorXd& x);

/// ||A - A^T||_max / ||A||_max.
double symmetry_error(const SparseMatrix& matrix);

}  // namespace cutfem
