#pragma once

#include "cutfem/basis.hpp"
#include "cutfem/mesh.hpp"
#include "cutfem/quadrature.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <span>
#include <vector>

namespace cutfem {

using ScalarField = std::function<double(const Point&)>;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Nitsche penalty beta = 25 p^2 and ghost-penalty weights gamma_j = 0.01 / (((j-1)!)^2 j).
struct PenaltyParameters {
  double beta = 0.0;
  std::vector<double> gamma;  // gamma[j - 1] for j = 1..p
};

PenaltyParameters penalty_parameters(int p);

/// Continuous global numbering of the Q_p nodes of the active elements.
class DofMap {
 public:
  DofMap(const ActiveMesh& mesh, int degree);

  int size() const { return num_dofs_; }
  int degree() const { return degree_; }
  int dofs_per_element() const { return (degree_ + 1) * (degree_ + 1); }

  /// Global dofs of the active element at position `active_index`, in local order.
  std::span<const int> element_dofs(int active_index) const {
    return {dofs_.data() + static_cast<std::size_t>(active_index) * dofs_per_element(),
            static_cast<std::size_t>(dofs_per_element())};
  }

  /// Physical coordinates of every dof.
  const PointList& dof_points() const { return points_; }

 private:
  int degree_;
  int num_dofs_ = 0;
  std::vector<int> dofs_;
  PointList points_;
};

struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Quadrature exactness parameters, see cut_volume_rule / cut_boundary_rule.
struct QuadratureOrders {
  int volume = 2;
  int boundary = 2;
  int ghost_points = 2;  // Gauss points per ghost-penalty face
  int error = 4;         // order of the rules used for error norms

  static QuadratureOrders defaults(int p) { return {2 * p, 2 * p, p + 1, 2 * p + 2}; }
};

/// (grad v, grad w) and (f, v) over the cut domain.
SparseSystem assemble_bulk(const ActiveMesh& mesh, const DofMap& dofs, const QpBasis& basis, const ScalarField& f,
                           const std::vector<CutVolumeRule>& rules);

/// -(d_n v, w) - (v, d_n w) + beta/h (v, w) over the polygon boundary.
SparseSystem assemble_nitsche_boundary(const ActiveMesh& mesh, const DofMap& dofs, const QpBasis& basis,
                                       const PenaltyParameters& params, const std::vector<CutBoundaryRule>& rules);

/// Sum over j and ghost faces of gamma_j h^(2j-1) ([d^j_n v], [d^j_n w])_F.
SparseSystem assemble_ghost_penalty(const ActiveMesh& mesh, const DofMap& dofs, const QpBasis& basis,
                                    const PenaltyParameters& params, int points);

/// s_h(u, u) evaluated face by face as a weighted sum of squared jumps, which stays
/// accurate when the jumps nearly vanish.
double ghost_penalty_energy(const ActiveMesh& mesh, const DofMap& dofs, const QpBasis& basis,
                            const PenaltyParameters& params, int points, const Eigen::VectorXd& u);

struct AssembledProblem {
  SparseSystem system;
  DofMap dofs;
  ElementRules rules;
};

AssembledProblem assemble_system(const ActiveMesh& mesh, const BoundaryPolygon& poly, const QpBasis& basis,
                                 const PenaltyParameters& params, const ScalarField& f,
                                 const QuadratureOrders& orders);

}  // namespace cutfem
