#include "support.hpp"

#include <gtest/gtest.h>

#include <Eigen/SparseCholesky>

#include <map>
#include <random>

using namespace cutfem;
using cutfem::testing::box_polygon;

namespace {

const ScalarField kOne = [](const Point&) { return 1.0; };

struct Problem {
  BoundaryPolygon poly;
  ActiveMesh mesh;
  QpBasis basis;
  PenaltyParameters params;
  AssembledProblem assembled;
};

Problem build(const BoundaryPolygon& poly, const BackgroundGrid& grid, int p) {
  ActiveMesh mesh = classify_elements(grid, poly);
  QpBasis basis(p);
  PenaltyParameters params = penalty_parameters(p);
  AssembledProblem assembled = assemble_system(mesh, poly, basis, params, kOne, QuadratureOrders::defaults(p));
  return {poly, std::move(mesh), basis, params, std::move(assembled)};
}

BoundaryPolygon unit_disk(int n = 400) { return cutfem::testing::regular_polygon(Point::Zero(), 1.0, n); }

BackgroundGrid disk_grid(int n) { return BackgroundGrid::square(-1.25, 2.5, n); }

double quadratic_form(const SparseMatrix& A, const Eigen::VectorXd& v) { return v.dot(A * v); }

}  // namespace

TEST(Penalty, Values) {
  EXPECT_EQ(penalty_parameters(1).beta, 25.0);
  EXPECT_EQ(penalty_parameters(2).beta, 100.0);
  EXPECT_EQ(penalty_parameters(3).beta, 225.0);
  const PenaltyParameters p3 = penalty_parameters(3);
  ASSERT_EQ(p3.gamma.size(), 3u);
  EXPECT_DOUBLE_EQ(p3.gamma[0], 0.01);
  EXPECT_DOUBLE_EQ(p3.gamma[1], 0.005);
  EXPECT_NEAR(p3.gamma[2], 8.3333e-4, 1e-8);
  EXPECT_DOUBLE_EQ(p3.gamma[2], 0.01 / 12);
  EXPECT_EQ(penalty_parameters(1).gamma.size(), 1u);
  EXPECT_THROW(penalty_parameters(0), ContractError);
  EXPECT_THROW(penalty_parameters(4), ContractError);
}

TEST(Bulk, RowSumsAndLoad) {
  for (int p = 1; p <= 3; ++p) {
    const BoundaryPolygon poly = perturb_circle_boundary(0.04, 0.0, 0.1, 0.1, 600);
    const BackgroundGrid grid = disk_grid(17);
    const ActiveMesh mesh = classify_elements(grid, poly);
    const DofMap dofs(mesh, p);
    const ElementRules rules = build_element_rules(mesh, poly, 2 * p, 2 * p);
    const SparseSystem bulk = assemble_bulk(mesh, dofs, QpBasis(p), kOne, rules.volume);
    const Eigen::VectorXd rows = bulk.matrix * Eigen::VectorXd::Ones(dofs.size());
    EXPECT_LE(rows.cwiseAbs().maxCoeff(), 1e-11) << p;
    EXPECT_NEAR(bulk.rhs.sum(), poly.signed_area(), 1e-10) << p;
  }
}

TEST(Bulk, SingleFittedBilinearElement) {
  for (double h : {1.0, 0.37, 1e-3}) {
    const BackgroundGrid grid(Point(-h, -h), h, 3, 3);
    const BoundaryPolygon poly = box_polygon(0, 0, h, h);
    const ActiveMesh mesh = classify_elements(grid, poly);
    ASSERT_EQ(mesh.num_active(), 1);
    const DofMap dofs(mesh, 1);
    ASSERT_EQ(dofs.size(), 4);
    const ElementRules rules = build_element_rules(mesh, poly, 2, 2);
    const SparseSystem bulk = assemble_bulk(mesh, dofs, QpBasis(1), kOne, rules.volume);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(bulk.matrix.coeff(i, i), 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(bulk.matrix.coeff(0, 3), -1.0 / 3.0, 1e-14);
    EXPECT_NEAR(bulk.matrix.coeff(0, 1), -1.0 / 6.0, 1e-14);
  }
}

TEST(Nitsche, PenaltyPartOnFittedElement) {
  const BackgroundGrid grid(Point(-1, -1), 1.0, 3, 3);
  const BoundaryPolygon poly = box_polygon(0, 0, 1, 1);
  const ActiveMesh mesh = classify_elements(grid, poly);
  const DofMap dofs(mesh, 1);
  const ElementRules rules = build_element_rules(mesh, poly, 2, 2);
  const QpBasis basis(1);
  PenaltyParameters with = penalty_parameters(1);
  PenaltyParameters without = with;
  without.beta = 0.0;
  const SparseMatrix penalty = assemble_nitsche_boundary(mesh, dofs, basis, with, rules.boundary).matrix -
                               assemble_nitsche_boundary(mesh, dofs, basis, without, rules.boundary).matrix;
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(penalty.coeff(i, i), 25.0 * 2.0 / 3.0, 1e-13);
  // Neighbouring corners share one edge with integral of phi_i phi_j = 1/6.
  EXPECT_NEAR(penalty.coeff(0, 1), 25.0 / 6.0, 1e-13);
  EXPECT_NEAR(penalty.coeff(0, 3), 0.0, 1e-13);
}

TEST(Nitsche, SymmetricAndEmptyRules) {
  const BoundaryPolygon poly = perturb_circle_boundary(0.03, 0.0, 0.1, 0.1, 500);
  const ActiveMesh mesh = classify_elements(disk_grid(15), poly);
  for (int p = 1; p <= 3; ++p) {
    const DofMap dofs(mesh, p);
    const ElementRules rules = build_element_rules(mesh, poly, 2 * p, 2 * p);
    const SparseSystem s = assemble_nitsche_boundary(mesh, dofs, QpBasis(p), penalty_parameters(p), rules.boundary);
    EXPECT_LE(symmetry_error(s.matrix), 1e-12);
    std::vector<CutBoundaryRule> empty(rules.boundary.size());
    const SparseSystem z = assemble_nitsche_boundary(mesh, dofs, QpBasis(p), penalty_parameters(p), empty);
    EXPECT_EQ(z.matrix.nonZeros(), 0);
    // Rows of dofs touching no boundary piece are zero.
    std::vector<bool> touched(static_cast<std::size_t>(dofs.size()), false);
    for (int k = 0; k < mesh.num_active(); ++k) {
      if (rules.boundary[static_cast<std::size_t>(k)].size() == 0) continue;
      for (int d : dofs.element_dofs(k)) touched[static_cast<std::size_t>(d)] = true;
    }
    const SparseMatrix dense_rows = s.matrix;
    for (int k = 0; k < dense_rows.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(dense_rows, k); it; ++it) {
        EXPECT_TRUE(touched[static_cast<std::size_t>(it.row())]);
      }
    }
  }
}

TEST(Ghost, TwoElementHandExample) {
  using C = ElementClass;
  const BackgroundGrid grid(Point(0, 0), 1.0, 2, 1);
  ActiveMesh mesh(grid, {C::Cut, C::Cut});
  mesh.set_ghost_faces(ghost_faces(mesh));
  ASSERT_EQ(mesh.ghost_faces().size(), 1u);
  const DofMap dofs(mesh, 1);
  ASSERT_EQ(dofs.size(), 6);
  const SparseSystem g = assemble_ghost_penalty(mesh, dofs, QpBasis(1), penalty_parameters(1), 2);
  const Eigen::VectorXd u = cutfem::testing::interpolate(dofs, [](const Point& x) { return x.x() <= 1.0 ? x.x() : 2.0 - x.x(); });
  EXPECT_NEAR(quadratic_form(g.matrix, u), 0.04, 1e-15);
  EXPECT_NEAR(ghost_penalty_energy(mesh, dofs, QpBasis(1), penalty_parameters(1), 2, u), 0.04, 1e-15);
}

TEST(Ghost, KernelContainsPolynomials) {
  const BoundaryPolygon poly = perturb_square_boundary(0.03, 64);
  const BackgroundGrid grid(Point(-0.23, -0.21), 1.5 / 19, 19, 19);
  const ActiveMesh mesh = classify_elements(grid, poly);
  ASSERT_GT(mesh.ghost_faces().size(), 50u);
  for (int p = 1; p <= 3; ++p) {
    const DofMap dofs(mesh, p);
    const SparseSystem g = assemble_ghost_penalty(mesh, dofs, QpBasis(p), penalty_parameters(p), p + 1);
    for (int a = 0; a <= p; ++a) {
      for (int b = 0; a + b <= p; ++b) {
        const Eigen::VectorXd u = cutfem::testing::interpolate(
            dofs, [&](const Point& x) { return std::pow(x.x(), a) * std::pow(x.y(), b); });
        EXPECT_LE(ghost_penalty_energy(mesh, dofs, QpBasis(p), penalty_parameters(p), p + 1, u), 1e-18)
            << p << " " << a << " " << b;
        // Through the assembled matrix the same value only survives up to rounding.
        EXPECT_LE(std::abs(quadratic_form(g.matrix, u)), 1e-12) << p << " " << a << " " << b;
      }
    }
  }
}

TEST(Ghost, PositiveSemidefinite) {
  const BoundaryPolygon poly = unit_disk();
  const ActiveMesh mesh = classify_elements(disk_grid(13), poly);
  std::mt19937 rng(17);
  std::normal_distribution<double> n01;
  for (int p = 1; p <= 3; ++p) {
    const DofMap dofs(mesh, p);
    const SparseSystem g = assemble_ghost_penalty(mesh, dofs, QpBasis(p), penalty_parameters(p), p + 1);
    EXPECT_LE(symmetry_error(g.matrix), 1e-15);
    for (int k = 0; k < 50; ++k) {
      Eigen::VectorXd v(dofs.size());
      for (int i = 0; i < v.size(); ++i) v(i) = n01(rng);
      const double form = quadratic_form(g.matrix, v);
      EXPECT_GE(form, -1e-14);
      EXPECT_NEAR(ghost_penalty_energy(mesh, dofs, QpBasis(p), penalty_parameters(p), p + 1, v), form,
                  1e-12 * std::abs(form));
    }
    const Eigen::VectorXd ev = cutfem::testing::dense_eigenvalues(g.matrix);
    EXPECT_GE(ev.minCoeff(), -1e-14 * ev.maxCoeff());
  }
}

TEST(System, SymmetricAndFactorizes) {
  // The 8x8 cut-disk instance.
  {
    const Problem pr = build(unit_disk(), disk_grid(8), 1);
    EXPECT_LE(symmetry_error(pr.assembled.system.matrix), 1e-12);
    Eigen::SimplicialLLT<SparseMatrix> llt(pr.assembled.system.matrix);
    EXPECT_EQ(llt.info(), Eigen::Success);
    EXPECT_GT(cutfem::testing::dense_eigenvalues(pr.assembled.system.matrix).minCoeff(), 0.0);
  }
  for (int p = 1; p <= 3; ++p) {
    for (int n : {11, 20}) {
      const Problem pr = build(perturb_circle_boundary(0.02, 0.0, 0.1, 0.1, 500), disk_grid(n), p);
      EXPECT_LE(symmetry_error(pr.assembled.system.matrix), 1e-12);
      if (p == 1) continue;  // see P1IndefiniteOnNearAlignedCuts
      Eigen::SimplicialLLT<SparseMatrix> llt(pr.assembled.system.matrix);
      EXPECT_EQ(llt.info(), Eigen::Success) << p << " " << n;
    }
  }
}

TEST(System, P1IndefiniteOnNearAlignedCuts) {
  // With beta = 25 and gamma_1 = 0.01 the p = 1 form loses coercivity when a boundary
  // stretch runs parallel to a grid line a small fraction s of a cell inside it.
  // Higher degrees stay definite on the same configurations.
  const BoundaryPolygon square = box_polygon(0.0, 0.0, 1.0, 1.0);
  for (double s : {0.01, 0.02}) {
    const double h = 1.0 / 8.0;
    const BackgroundGrid grid(Point(-(1.0 - s) * h, -(1.0 - s) * h), h, 10, 10);
    for (int p = 1; p <= 3; ++p) {
      const Problem pr = build(square, grid, p);
      const double lmin = cutfem::testing::dense_eigenvalues(pr.assembled.system.matrix).minCoeff();
      if (p == 1) {
        EXPECT_LT(lmin, 0.0) << s;
        const SymmetricSolve sol = solve_symmetric(pr.assembled.system);
        EXPECT_FALSE(sol.positive_definite);
        EXPECT_LE(galerkin_residual(pr.assembled.system, sol.x), 1e-12);
        EXPECT_THROW(solve_spd(pr.assembled.system), SolverError);
      } else {
        EXPECT_GT(lmin, 0.0) << p << " " << s;
      }
    }
  }
  const Problem pr = build(perturb_circle_boundary(0.02, 0.0, 0.1, 0.1, 500), disk_grid(20), 1);
  EXPECT_LT(cutfem::testing::dense_eigenvalues(pr.assembled.system.matrix).minCoeff(), 0.0);
}

TEST(DofMap, CountsDistinctNodesAndIsContinuous) {
  const BoundaryPolygon poly = perturb_square_boundary(0.02, 40);
  const BackgroundGrid grid(Point(-0.3, -0.27), 0.11, 15, 15);
  const ActiveMesh mesh = classify_elements(grid, poly);
  for (int p = 1; p <= 3; ++p) {
    const DofMap dofs(mesh, p);
    const QpBasis basis(p);
    std::map<std::pair<long long, long long>, int> nodes;
    for (int k = 0; k < mesh.num_active(); ++k) {
      const int cell = mesh.active()[static_cast<std::size_t>(k)];
      const auto element = dofs.element_dofs(k);
      for (int local = 0; local < basis.num_functions(); ++local) {
        const Point x = grid.cell_box(cell).min() + grid.h * basis.node(local);
        const std::pair<long long, long long> key{std::llround(x.x() * 3e6), std::llround(x.y() * 3e6)};
        const int d = element[static_cast<std::size_t>(local)];
        const auto [it, fresh] = nodes.emplace(key, d);
        EXPECT_EQ(it->second, d);  // shared nodes map to one dof
        EXPECT_NEAR((dofs.dof_points().col(d) - x).norm(), 0.0, 1e-13);
      }
    }
    EXPECT_EQ(dofs.size(), static_cast<int>(nodes.size()));
  }
  EXPECT_THROW(DofMap(mesh, 4), ContractError);
}

TEST(Conditioning, GhostPenaltyControlsSliverCuts) {
  // Grid line at x = 1 - 1e-7 h: a column of cut cells with area 1e-7 h^2 each.
  const int p = 2;
  const double h = 1.0 / 8.0;
  const double eps = 1e-7;
  const BackgroundGrid grid(Point(1.0 - eps * h - 9 * h, -1.5 * h), h, 11, 11);
  const BoundaryPolygon poly = box_polygon(0.0, 0.0, 1.0, 1.0);
  const ActiveMesh mesh = classify_elements(grid, poly);
  const DofMap dofs(mesh, p);
  const ElementRules rules = build_element_rules(mesh, poly, 2 * p, 2 * p);
  double smallest = 1.0;
  for (const auto& r : rules.volume) {
    if (r.size() > 0) smallest = std::min(smallest, r.weights.sum() / (h * h));
  }
  ASSERT_LT(smallest, 1e-6);
  const QpBasis basis(p);
  const PenaltyParameters params = penalty_parameters(p);
  const SparseMatrix a = assemble_bulk(mesh, dofs, basis, kOne, rules.volume).matrix +
                         assemble_nitsche_boundary(mesh, dofs, basis, params, rules.boundary).matrix;
  const SparseMatrix s = assemble_ghost_penalty(mesh, dofs, basis, params, p + 1).matrix;
  const double stabilized = cutfem::testing::condition_number(a + s);
  const double unstabilized = cutfem::testing::condition_number(a);
  EXPECT_GE(unstabilized, 1e3 * stabilized) << stabilized << " " << unstabilized;
}

TEST(Conditioning, ScalesLikeInverseHSquared) {
  // Grid offset by h/2 at every level so each level sees the same cut configuration;
  // cut-localized modes then keep a fixed eigenvalue and the smallest eigenvalue is
  // the smooth O(h^2) mode once h is small enough.
  const BoundaryPolygon square = box_polygon(0.0, 0.0, 1.0, 1.0);
  for (int p = 1; p <= 2; ++p) {
    std::vector<double> cond;
    for (int n : {32, 64, 128}) {
      const double h = 1.0 / n;
      const BackgroundGrid grid(Point(-1.5 * h, -1.5 * h), h, n + 3, n + 3);
      const Problem pr = build(square, grid, p);
      const auto [lmin, lmax] = cutfem::testing::extreme_eigenvalues_spd(pr.assembled.system.matrix);
      ASSERT_GT(lmin, 0.0);
      cond.push_back(lmax / lmin);
    }
    for (std::size_t k = 1; k < cond.size(); ++k) {
      EXPECT_NEAR(cond[k] / cond[k - 1], 4.0, 1.2) << p << ": " << cond[k - 1] << " -> " << cond[k];
    }
  }
}
