#pragma once

#include "cutfem/assembly.hpp"
#include "cutfem/reference.hpp"

namespace cutfem {

/// Finite element function u_h on the active mesh.
struct DiscreteSolution {
  ActiveMesh mesh;
  DofMap dofs;
  QpBasis basis;
  Eigen::VectorXd coefficients;

  DiscreteSolution(ActiveMesh mesh_, DofMap dofs_, QpBasis basis_, Eigen::VectorXd coefficients_);
};

/// u_h and its gradient inside the active element at position `active_index`.
ValueGradient eval_in_element(const DiscreteSolution& sol, int active_index, const Point& x);

/// u_h at x, using the lowest-id active cell whose closed box contains x.
/// Throws EvaluationError outside the active mesh.
ValueGradient eval_discrete(const DiscreteSolution& sol, const Point& x);

struct ErrorNorms {
  double energy = 0.0;
  double h1_semi = 0.0;
  double l2 = 0.0;
  double stab_part = 0.0;  // sqrt(s_h(u_h, u_h))
};

/// Errors of u_h against the reference over the polygon domain. The energy norm is
/// ||grad e||^2 + h ||d_n e||^2 + h^-1 ||e||^2 (boundary) + s_h(u_h, u_h).
ErrorNorms compute_error_norms(const DiscreteSolution& sol, const ReferenceSolution& ref, const BoundaryPolygon& poly,
                               const PenaltyParameters& params, const QuadratureOrders& orders);

}  // namespace cutfem
