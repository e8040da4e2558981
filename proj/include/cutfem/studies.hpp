#pragma once

#include "cutfem/assembly.hpp"
#include "cutfem/norms.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cutfem {

enum class StudyKind { DeltaScaling, NormalApprox, LevelSet, Single };
enum class NormTarget { Energy, H1, L2 };
enum class Geometry { Square, Circle, LevelSet };

struct StudyConfig {
  StudyKind study = StudyKind::DeltaScaling;
  int p = 1;
  int levels = 0;      // 0: 5 for p <= 2, 4 for p = 3
  double h0 = 0.0;     // 0: side of the background square / 12
  double alpha = 2.0;  // delta = h^alpha (delta study)
  double alpha_n = 0.0;
  NormTarget norm_target = NormTarget::Energy;
  int n_terms = 0;  // 0: 50 for p <= 2, 100 for p = 3
  std::optional<QuadratureOrders> orders;
  int vertex_density = 64;  // polygon vertices per unit of 1/h
  // Single runs only.
  Geometry geometry = Geometry::Square;
  double delta = 0.0;

  int resolved_levels() const { return levels > 0 ? levels : (p == 3 ? 4 : 5); }
  int resolved_terms() const { return n_terms > 0 ? n_terms : (p == 3 ? 100 : 50); }
  QuadratureOrders resolved_orders() const { return orders ? *orders : QuadratureOrders::defaults(p); }
  /// Throws ContractError on inconsistent settings.
  void validate() const;
};

struct ConvergenceRecord {
  std::string study;
  int p = 1;
  int level = 0;
  double h = 0.0;
  double delta = 0.0;
  double delta_n = 0.0;
  int dofs = 0;
  double err_energy = 0.0;
  double err_h1 = 0.0;
  double err_l2 = 0.0;
  std::optional<double> rate_energy;
  std::optional<double> rate_h1;
  std::optional<double> rate_l2;
  double wall_time = 0.0;

  // Diagnostics, not written to CSV.
  double stab_part = 0.0;
  double galerkin_residual = 0.0;
  double symmetry_error = 0.0;
  bool positive_definite = true;
};

/// Raised when one refinement level of a study fails.
class StudyError : public std::runtime_error {
 public:
  StudyError(int level, const std::string& what)
      : std::runtime_error("level " + std::to_string(level) + ": " + what), level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

std::string study_name(StudyKind kind);

/// Background grid of refinement level `level` with h = h0 / 2^level. It starts at
/// lo - shift * h0 and covers at least [lo - shift * h0, lo + side]^2.
BackgroundGrid study_grid(double lo, double side, double h0, int level, double shift = 0.0);

std::vector<ConvergenceRecord> run_delta_study(const StudyConfig& cfg);
std::vector<ConvergenceRecord> run_normal_study(const StudyConfig& cfg);
std::vector<ConvergenceRecord> run_levelset_study(const StudyConfig& cfg);
/// One solve at h = h0 on the configured geometry.
ConvergenceRecord run_single(const StudyConfig& cfg);
/// Dispatches on cfg.study.
std::vector<ConvergenceRecord> run_study(const StudyConfig& cfg);

/// Solves -Laplace(u) = f with the full method on one polygon and grid and measures
/// the errors against `ref`.
ConvergenceRecord solve_and_measure(const BackgroundGrid& grid, const BoundaryPolygon& poly, const ExactDomain& domain,
                                    const ReferenceSolution& ref, int p, const QuadratureOrders& orders);

/// Pairwise observed orders log(e_i / e_{i+1}) / log(h_i / h_{i+1}).
void compute_rates(std::vector<ConvergenceRecord>& records);

enum class ErrorKind { Energy, H1, L2, Delta, DeltaN };
/// Least-squares slope of log(error) against log(h) over the last `count` records.
double least_squares_rate(const std::vector<ConvergenceRecord>& records, ErrorKind kind, int count = 3);

void write_records_csv(const std::vector<ConvergenceRecord>& records, std::ostream& out);
void write_records_csv(const std::vector<ConvergenceRecord>& records, const std::string& path);
std::vector<ConvergenceRecord> read_records_csv(std::istream& in);

/// Shortest round-trip scientific representation.
std::string format_double(double value);

}  // namespace cutfem
