#include "cutfem/assembly.hpp"

#include <array>
#include <cmath>
#include <string>

namespace cutfem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void scatter(std::span<const int> rows, std::span<const int> cols, const Eigen::MatrixXd& local, Triplets& out) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double v = local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0) out.emplace_back(rows[i], cols[j], v);
    }
  }
}

SparseSystem finish(int n, const Triplets& triplets, Eigen::VectorXd rhs) {
  SparseSystem system;
  system.matrix.resize(n, n);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  system.matrix.makeCompressed();
  system.rhs = std::move(rhs);
  return system;
}

Point reference_point(const Box& box, const Point& x, double h) { return (x - box.min()) / h; }

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace

PenaltyParameters penalty_parameters(int p) {
  if (p < 1 || p > 3) throw ContractError("penalty_parameters: unsupported degree " + std::to_string(p));
  PenaltyParameters params;
  params.beta = 25.0 * p * p;
  for (int j = 1; j <= p; ++j) {
    const double f = factorial(j - 1);
    params.gamma.push_back(0.01 / (f * f * j));
  }
  return params;
}

DofMap::DofMap(const ActiveMesh& mesh, int degree) : degree_(degree) {
  if (degree < 1 || degree > 3) throw ContractError("DofMap: degree must be 1, 2 or 3");
  const BackgroundGrid& grid = mesh.grid();
  const int p = degree;
  const long long stride = static_cast<long long>(p) * grid.nx + 1;
  const long long total = stride * (static_cast<long long>(p) * grid.ny + 1);
  std::vector<int> numbering(static_cast<std::size_t>(total), -1);
  const int m = dofs_per_element();

  auto global_node = [&](int cell, int local) {
    const long long I = static_cast<long long>(p) * grid.cell_i(cell) + local % (p + 1);
    const long long J = static_cast<long long>(p) * grid.cell_j(cell) + local / (p + 1);
    return I + stride * J;
  };
  for (int cell : mesh.active()) {
    for (int local = 0; local < m; ++local) numbering[static_cast<std::size_t>(global_node(cell, local))] = 0;
  }
  std::vector<long long> owners;
  for (long long g = 0; g < total; ++g) {
    if (numbering[static_cast<std::size_t>(g)] == 0) {
      numbering[static_cast<std::size_t>(g)] = num_dofs_++;
      owners.push_back(g);
    }
  }
  dofs_.reserve(static_cast<std::size_t>(mesh.num_active()) * m);
  for (int cell : mesh.active()) {
    for (int local = 0; local < m; ++local) {
      dofs_.push_back(numbering[static_cast<std::size_t>(global_node(cell, local))]);
    }
  }
  points_.resize(2, num_dofs_);
  for (int d = 0; d < num_dofs_; ++d) {
    const long long g = owners[static_cast<std::size_t>(d)];
    points_.col(d) = grid.origin + Point(static_cast<double>(g % stride), static_cast<double>(g / stride)) * grid.h / p;
  }
}

SparseSystem assemble_bulk(const ActiveMesh& mesh, const DofMap& dofs, const QpBasis& basis, const ScalarField& f,
                           const std::vector<CutVolumeRule>& rules) {
  const double h = mesh.h();
  const int m = basis.num_functions();
  Triplets triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.size());
  Eigen::MatrixXd local(m, m);
  Eigen::VectorXd load(m);
  Eigen::VectorXd values;
  Eigen::Matrix2Xd grads;
  for (int k = 0; k < mesh.num_active(); ++k) {
    const CutVolumeRule& rule = rules[static_cast<std::size_t>(k)];
    if (rule.size() == 0) continue;
    const Box box = mesh.grid().cell_box(mesh.active()[static_cast<std::size_t>(k)]);
    local.setZero();
    load.setZero();
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      const Point x = rule.points.col(q);
      basis.evaluate(reference_point(box, x, h), h, values, grads);
      const double w = rule.weights(q);
      local.noalias() += w * grads.transpose() * grads;
      if (f) load.noalias() += (w * f(x)) * values;
    }
    const auto element = dofs.element_dofs(k);
    scatter(element, element, local, triplets);
    for (int i = 0; i < m; ++i) rhs(element[static_cast<std::size_t>(i)]) += load(i);
  }
  return finish(dofs.size(), triplets, std::move(rhs));
}

SparseSystem assemble_nitsche_boundary(const ActiveMesh& mesh, const DofMap& dofs, const QpBasis& basis,
                                       const PenaltyParameters& params, const std::vector<CutBoundaryRule>& rules) {
  const double h = mesh.h();
  const int m = basis.num_functions();
  Triplets triplets;
  Eigen::MatrixXd local(m, m);
  Eigen::VectorXd values;
  Eigen::Matrix2Xd grads;
  for (int k = 0; k < mesh.num_active(); ++k) {
    const CutBoundaryRule& rule = rules[static_cast<std::size_t>(k)];
    if (rule.size() == 0) continue;
    const Box box = mesh.grid().cell_box(mesh.active()[static_cast<std::size_t>(k)]);
    local.setZero();
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      basis.evaluate(reference_point(box, rule.points.col(q), h), h, values, grads);
      const Eigen::VectorXd flux = grads.transpose() * rule.normals.col(q);
      const double w = rule.weights(q);
      local.noalias() -= w * (flux * values.transpose() + values * flux.transpose());
      local.noalias() += (w * params.beta / h) * values * values.transpose();
    }
    const auto element = dofs.element_dofs(k);
    scatter(element, element, local, triplets);
  }
  return finish(dofs.size(), triplets, Eigen::VectorXd::Zero(dofs.size()));
}

namespace {

// Weighted jump vectors of one face orientation: s_h on a face is
// sum_k weight_k (jump_k . [u_first; u_second])^2. Every face of one orientation
// shares them on a uniform grid.
struct FaceJumps {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> jumps;
};

std::array<FaceJumps, 2> face_jumps(const QpBasis& basis, const PenaltyParameters& params, int points, double h) {
  const int m = basis.num_functions();
  const int p = basis.degree();
  if (static_cast<int>(params.gamma.size()) < p) throw ContractError("assemble_ghost_penalty: missing gamma_j");
  const auto gauss = gauss_legendre_1d<double>(points);
  std::array<FaceJumps, 2> out;
  for (int a = 0; a < 2; ++a) {
    const Axis axis = a == 0 ? Axis::X : Axis::Y;
    for (Eigen::Index q = 0; q < gauss.points.size(); ++q) {
      const double s = 0.5 * (1.0 + gauss.points(q));
      const Point ref_first = axis == Axis::X ? Point(1.0, s) : Point(s, 1.0);
      const Point ref_second = axis == Axis::X ? Point(0.0, s) : Point(s, 0.0);
      for (int j = 1; j <= p; ++j) {
        Eigen::VectorXd jump(2 * m);
        jump.head(m) = basis.axis_derivative(ref_first, axis, j, h);
        jump.tail(m) = -basis.axis_derivative(ref_second, axis, j, h);
        out[static_cast<std::size_t>(a)].weights.push_back(0.5 * h * gauss.weights(q) *
                                                           params.gamma[static_cast<std::size_t>(j - 1)] *
                                                           std::pow(h, 2 * j - 1));
        out[static_cast<std::size_t>(a)].jumps.push_back(std::move(jump));
      }
    }
  }
  return out;
}

}  // namespace

SparseSystem assemble_ghost_penalty(const ActiveMesh& mesh, const DofMap& dofs, const QpBasis& basis,
                                    const PenaltyParameters& params, int points) {
  const int m = basis.num_functions();
  const auto jumps = face_jumps(basis, params, points, mesh.h());
  std::array<Eigen::MatrixXd, 2> face_matrix;
  for (std::size_t a = 0; a < 2; ++a) {
    face_matrix[a] = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (std::size_t k = 0; k < jumps[a].jumps.size(); ++k) {
      face_matrix[a].noalias() += jumps[a].weights[k] * jumps[a].jumps[k] * jumps[a].jumps[k].transpose();
    }
  }

  Triplets triplets;
  std::vector<int> face_dofs(static_cast<std::size_t>(2 * m));
  for (const GhostFace& face : mesh.ghost_faces()) {
    const auto first = dofs.element_dofs(mesh.active_index(face.first));
    const auto second = dofs.element_dofs(mesh.active_index(face.second));
    std::copy(first.begin(), first.end(), face_dofs.begin());
    std::copy(second.begin(), second.end(), face_dofs.begin() + m);
    scatter(face_dofs, face_dofs, face_matrix[face.axis == Axis::X ? 0 : 1], triplets);
  }
  return finish(dofs.size(), triplets, Eigen::VectorXd::Zero(dofs.size()));
}

double ghost_penalty_energy(const ActiveMesh& mesh, const DofMap& dofs, const QpBasis& basis,
                            const PenaltyParameters& params, int points, const Eigen::VectorXd& u) {
  if (u.size() != dofs.size()) throw ContractError("ghost_penalty_energy: coefficient size mismatch");
  const int m = basis.num_functions();
  const auto jumps = face_jumps(basis, params, points, mesh.h());
  Eigen::VectorXd local(2 * m);
  double total = 0.0;
  for (const GhostFace& face : mesh.ghost_faces()) {
    const auto first = dofs.element_dofs(mesh.active_index(face.first));
    const auto second = dofs.element_dofs(mesh.active_index(face.second));
    for (int i = 0; i < m; ++i) {
      local(i) = u(first[static_cast<std::size_t>(i)]);
      local(m + i) = u(second[static_cast<std::size_t>(i)]);
    }
    const FaceJumps& fj = jumps[face.axis == Axis::X ? 0 : 1];
    for (std::size_t k = 0; k < fj.jumps.size(); ++k) {
      const double jump = fj.jumps[k].dot(local);
      total += fj.weights[k] * jump * jump;
    }
  }
  return total;
}

AssembledProblem assemble_system(const ActiveMesh& mesh, const BoundaryPolygon& poly, const QpBasis& basis,
                                 const PenaltyParameters& params, const ScalarField& f,
                                 const QuadratureOrders& orders) {
  AssembledProblem problem{{}, DofMap(mesh, basis.degree()), build_element_rules(mesh, poly, orders.volume, orders.boundary)};
  SparseSystem bulk = assemble_bulk(mesh, problem.dofs, basis, f, problem.rules.volume);
  const SparseSystem nitsche = assemble_nitsche_boundary(mesh, problem.dofs, basis, params, problem.rules.boundary);
  const SparseSystem ghost = assemble_ghost_penalty(mesh, problem.dofs, basis, params, orders.ghost_points);
  problem.system.matrix = bulk.matrix + nitsche.matrix + ghost.matrix;
  problem.system.matrix.makeCompressed();
  problem.system.rhs = std::move(bulk.rhs);
  return problem;
}

}  // namespace cutfem
