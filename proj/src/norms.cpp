#include "cutfem/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cutfem {

DiscreteSolution::DiscreteSolution(ActiveMesh mesh_, DofMap dofs_, QpBasis basis_, Eigen::VectorXd coefficients_)
    : mesh(std::move(mesh_)), dofs(std::move(dofs_)), basis(std::move(basis_)), coefficients(std::move(coefficients_)) {
  if (coefficients.size() != dofs.size()) throw ContractError("DiscreteSolution: coefficient count != dof count");
  if (basis.degree() != dofs.degree()) throw ContractError("DiscreteSolution: basis degree != dof degree");
}

ValueGradient eval_in_element(const DiscreteSolution& sol, int active_index, const Point& x) {
  const double h = sol.mesh.h();
  const Box box = sol.mesh.grid().cell_box(sol.mesh.active()[static_cast<std::size_t>(active_index)]);
  Eigen::VectorXd values;
  Eigen::Matrix2Xd grads;
  sol.basis.evaluate((x - box.min()) / h, h, values, grads);
  ValueGradient out;
  const auto element = sol.dofs.element_dofs(active_index);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double c = sol.coefficients(element[static_cast<std::size_t>(i)]);
    out.value += c * values(i);
    out.gradient += c * grads.col(i);
  }
  return out;
}

ValueGradient eval_discrete(const DiscreteSolution& sol, const Point& x) {
  const BackgroundGrid& grid = sol.mesh.grid();
  if (!x.allFinite()) throw EvaluationError("eval_discrete: non-finite point");
  const int ci = static_cast<int>(std::floor((x.x() - grid.origin.x()) / grid.h));
  const int cj = static_cast<int>(std::floor((x.y() - grid.origin.y()) / grid.h));
  int best = std::numeric_limits<int>::max();
  for (int j = cj - 1; j <= cj + 1; ++j) {
    for (int i = ci - 1; i <= ci + 1; ++i) {
      if (i < 0 || j < 0 || i >= grid.nx || j >= grid.ny) continue;
      const int cell = grid.cell_id(i, j);
      if (cell < best && sol.mesh.is_active(cell) && grid.cell_box(cell).contains(x)) best = cell;
    }
  }
  if (best == std::numeric_limits<int>::max()) throw EvaluationError("eval_discrete: point outside the active mesh");
  return eval_in_element(sol, sol.mesh.active_index(best), x);
}

ErrorNorms compute_error_norms(const DiscreteSolution& sol, const ReferenceSolution& ref, const BoundaryPolygon& poly,
                               const PenaltyParameters& params, const QuadratureOrders& orders) {
  const double h = sol.mesh.h();
  const ElementRules rules = build_element_rules(sol.mesh, poly, orders.error, orders.error);
  double grad2 = 0.0;
  double l2 = 0.0;
  double flux2 = 0.0;
  double trace2 = 0.0;
  for (int k = 0; k < sol.mesh.num_active(); ++k) {
    const CutVolumeRule& vol = rules.volume[static_cast<std::size_t>(k)];
    for (Eigen::Index q = 0; q < vol.size(); ++q) {
      const Point x = vol.points.col(q);
      const ValueGradient uh = eval_in_element(sol, k, x);
      const ValueGradient u = ref(x);
      grad2 += vol.weights(q) * (u.gradient - uh.gradient).squaredNorm();
      l2 += vol.weights(q) * (u.value - uh.value) * (u.value - uh.value);
    }
    const CutBoundaryRule& bnd = rules.boundary[static_cast<std::size_t>(k)];
    for (Eigen::Index q = 0; q < bnd.size(); ++q) {
      const Point x = bnd.points.col(q);
      const ValueGradient uh = eval_in_element(sol, k, x);
      const ValueGradient u = ref(x);
      const double dn = (u.gradient - uh.gradient).dot(bnd.normals.col(q));
      flux2 += bnd.weights(q) * dn * dn;
      trace2 += bnd.weights(q) * (u.value - uh.value) * (u.value - uh.value);
    }
  }
  const double stab =
      ghost_penalty_energy(sol.mesh, sol.dofs, sol.basis, params, orders.ghost_points, sol.coefficients);

  ErrorNorms norms;
  norms.h1_semi = std::sqrt(grad2);
  norms.l2 = std::sqrt(l2);
  norms.stab_part = std::sqrt(stab);
  norms.energy = std::sqrt(grad2 + h * flux2 + trace2 / h + stab);
  return norms;
}

}  // namespace cutfem
