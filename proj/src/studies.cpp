#include "cutfem/studies.hpp"

#include "cutfem/solver.hpp"

#include <chrono>
#include <cmath>

namespace cutfem {

namespace {

constexpr double kSquareLo = -0.25;
constexpr double kSquareSide = 1.5;
// The square grid is shifted by a third of a coarse cell. The sides x, y = 0, 1 then sit
// a third of a cell from the nearest grid line on every level (1/3 -> 2/3 -> 1/3 under
// halving), so no level produces a boundary that runs along a grid line.
constexpr double kSquareShift = 1.0 / 3.0;
constexpr double kCircleLo = -1.25;
constexpr double kCircleSide = 2.5;

double resolved_h0(const StudyConfig& cfg, double side) { return cfg.h0 > 0.0 ? cfg.h0 : side / 12.0; }

int vertex_count(const StudyConfig& cfg, double h) {
  return cfg.vertex_density * static_cast<int>(std::ceil(1.0 / h - 1e-9));
}

BoundaryPolygon square_polygon(const StudyConfig& cfg, double delta, double h) {
  return perturb_square_boundary(delta, std::max(16, vertex_count(cfg, h) / 4));
}

BoundaryPolygon circle_polygon(const StudyConfig& cfg, double delta, double h, double h0) {
  const int freq = circle_perturbation_frequency(cfg.alpha_n, h, h0);
  return perturb_circle_boundary(delta, cfg.alpha_n, h, h0, std::max(vertex_count(cfg, h), 16 * freq));
}

double normal_study_exponent(const StudyConfig& cfg) {
  switch (cfg.norm_target) {
    case NormTarget::Energy: return cfg.p + 0.5;
    case NormTarget::H1: return cfg.p;
    case NormTarget::L2: return cfg.p + 1.0;
  }
  return cfg.p + 0.5;
}

template <typename MakePolygon>
std::vector<ConvergenceRecord> run_levels(const StudyConfig& cfg, double lo, double side, double shift,
                                          const ExactDomain& domain, const ReferenceSolution& ref,
                                          MakePolygon make_polygon) {
  cfg.validate();
  const double h0 = resolved_h0(cfg, side);
  const QuadratureOrders orders = cfg.resolved_orders();
  std::vector<ConvergenceRecord> records;
  for (int level = 0; level < cfg.resolved_levels(); ++level) {
    try {
      const auto start = std::chrono::steady_clock::now();
      const BackgroundGrid grid = study_grid(lo, side, h0, level, shift);
      const BoundaryPolygon poly = make_polygon(grid, h0);
      ConvergenceRecord record = solve_and_measure(grid, poly, domain, ref, cfg.p, orders);
      record.study = study_name(cfg.study);
      record.level = level;
      record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      records.push_back(std::move(record));
    } catch (const std::exception& e) {
      throw StudyError(level, e.what());
    }
  }
  compute_rates(records);
  return records;
}

}  // namespace

void StudyConfig::validate() const {
  if (p < 1 || p > 3) throw ContractError("p must be 1, 2 or 3");
  if (levels < 0 || (study != StudyKind::Single && levels != 0 && levels < 3)) {
    throw ContractError("levels must be at least 3");
  }
  if (h0 < 0.0 || !std::isfinite(h0)) throw ContractError("h0 must be positive");
  if (n_terms < 0) throw ContractError("terms must be positive");
  if (vertex_density < 4) throw ContractError("vertex density must be at least 4");
  if (!std::isfinite(alpha) || !std::isfinite(alpha_n) || alpha_n < 0.0) {
    throw ContractError("alpha and alpha-n must be finite, alpha-n >= 0");
  }
  if (study == StudyKind::LevelSet && p == 3) throw ContractError("the level-set study supports p = 1, 2");
  if (study == StudyKind::NormalApprox && p != 2) throw ContractError("the normal study runs with p = 2");
}

std::string study_name(StudyKind kind) {
  switch (kind) {
    case StudyKind::DeltaScaling: return "delta";
    case StudyKind::NormalApprox: return "normal";
    case StudyKind::LevelSet: return "levelset";
    case StudyKind::Single: return "single";
  }
  return "unknown";
}

BackgroundGrid study_grid(double lo, double side, double h0, int level, double shift) {
  const double h = std::ldexp(h0, -level);
  const double start = lo - shift * h0;
  const int n = static_cast<int>(std::ceil((lo + side - start) / h - 1e-9));
  return {Point(start, start), h, n, n};
}

ConvergenceRecord solve_and_measure(const BackgroundGrid& grid, const BoundaryPolygon& poly, const ExactDomain& domain,
                                    const ReferenceSolution& ref, int p, const QuadratureOrders& orders) {
  const ActiveMesh mesh = classify_elements(grid, poly);
  const QpBasis basis(p);
  const PenaltyParameters params = penalty_parameters(p);
  const ScalarField one = [](const Point&) { return 1.0; };
  AssembledProblem problem = assemble_system(mesh, poly, basis, params, one, orders);
  const SymmetricSolve solved = solve_symmetric(problem.system);
  const Eigen::VectorXd& x = solved.x;

  ConvergenceRecord record;
  record.p = p;
  record.h = grid.h;
  record.dofs = problem.dofs.size();
  record.positive_definite = solved.positive_definite;
  record.galerkin_residual = galerkin_residual(problem.system, x);
  record.symmetry_error = symmetry_error(problem.system.matrix);
  const DiscreteSolution sol(mesh, std::move(problem.dofs), basis, x);
  const ErrorNorms norms = compute_error_norms(sol, ref, poly, params, orders);
  record.err_energy = norms.energy;
  record.err_h1 = norms.h1_semi;
  record.err_l2 = norms.l2;
  record.stab_part = norms.stab_part;
  const GeometricErrors geo = measure_geometric_errors(poly, domain);
  record.delta = geo.delta;
  record.delta_n = geo.delta_n;
  return record;
}

std::vector<ConvergenceRecord> run_delta_study(const StudyConfig& cfg) {
  if (cfg.study != StudyKind::DeltaScaling) throw ContractError("run_delta_study: wrong study kind");
  const ReferenceSolution ref = ReferenceSolution::square_series(cfg.resolved_terms());
  return run_levels(cfg, kSquareLo, kSquareSide, kSquareShift, ExactDomain::unit_square(), ref,
                    [&](const BackgroundGrid& grid, double) {
                      return square_polygon(cfg, std::pow(grid.h, cfg.alpha), grid.h);
                    });
}

std::vector<ConvergenceRecord> run_normal_study(const StudyConfig& cfg) {
  if (cfg.study != StudyKind::NormalApprox) throw ContractError("run_normal_study: wrong study kind");
  const double exponent = normal_study_exponent(cfg);
  return run_levels(cfg, kCircleLo, kCircleSide, 0.0, ExactDomain::disk(Point::Zero(), 1.0),
                    ReferenceSolution::disk_quadratic(), [&](const BackgroundGrid& grid, double h0) {
                      return circle_polygon(cfg, std::pow(grid.h, exponent), grid.h, h0);
                    });
}

std::vector<ConvergenceRecord> run_levelset_study(const StudyConfig& cfg) {
  if (cfg.study != StudyKind::LevelSet) throw ContractError("run_levelset_study: wrong study kind");
  const ExactDomain disk = ExactDomain::disk(Point::Zero(), 1.0);
  return run_levels(cfg, kCircleLo, kCircleSide, 0.0, disk, ReferenceSolution::disk_quadratic(),
                    [&](const BackgroundGrid& grid, double) { return extract_levelset_boundary(disk, grid); });
}

ConvergenceRecord run_single(const StudyConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const bool square = cfg.geometry == Geometry::Square;
  const double lo = square ? kSquareLo : kCircleLo;
  const double side = square ? kSquareSide : kCircleSide;
  const double h0 = resolved_h0(cfg, side);
  const BackgroundGrid grid = study_grid(lo, side, h0, 0, square ? kSquareShift : 0.0);
  const ExactDomain domain = square ? ExactDomain::unit_square() : ExactDomain::disk(Point::Zero(), 1.0);
  const ReferenceSolution ref =
      square ? ReferenceSolution::square_series(cfg.resolved_terms()) : ReferenceSolution::disk_quadratic();
  const BoundaryPolygon poly = cfg.geometry == Geometry::Square   ? square_polygon(cfg, cfg.delta, grid.h)
                               : cfg.geometry == Geometry::Circle ? circle_polygon(cfg, cfg.delta, grid.h, h0)
                                                                  : extract_levelset_boundary(domain, grid);
  ConvergenceRecord record = solve_and_measure(grid, poly, domain, ref, cfg.p, cfg.resolved_orders());
  record.study = study_name(StudyKind::Single);
  record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

std::vector<ConvergenceRecord> run_study(const StudyConfig& cfg) {
  switch (cfg.study) {
    case StudyKind::DeltaScaling: return run_delta_study(cfg);
    case StudyKind::NormalApprox: return run_normal_study(cfg);
    case StudyKind::LevelSet: return run_levelset_study(cfg);
    case StudyKind::Single: return {run_single(cfg)};
  }
  return {};
}

}  // namespace cutfem
