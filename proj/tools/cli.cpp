#include "cli.hpp"

#include "cutfem/studies.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>

namespace cutfem {

namespace {

constexpr int kExitBadArguments = 2;
constexpr int kExitFailure = 1;

void print_table(const std::vector<ConvergenceRecord>& records, std::ostream& out) {
  const auto rate = [](const std::optional<double>& r) {
    std::ostringstream s;
    if (r) s << std::fixed << std::setprecision(2) << *r;
    else s << "-";
    return s.str();
  };
  out << std::left << std::setw(6) << "level" << std::setw(12) << "h" << std::setw(9) << "dofs" << std::setw(12)
      << "delta" << std::setw(12) << "delta_n" << std::setw(12) << "energy" << std::setw(7) << "rate" << std::setw(12)
      << "h1" << std::setw(7) << "rate" << std::setw(12) << "l2" << std::setw(7) << "rate"
      << "time[s]\n";
  for (const ConvergenceRecord& r : records) {
    out << std::setw(6) << r.level << std::scientific << std::setprecision(3) << std::setw(12) << r.h << std::setw(9)
        << r.dofs << std::setw(12) << r.delta << std::setw(12) << r.delta_n << std::setw(12) << r.err_energy
        << std::setw(7) << rate(r.rate_energy) << std::setw(12) << r.err_h1 << std::setw(7) << rate(r.rate_h1)
        << std::setw(12) << r.err_l2 << std::setw(7) << rate(r.rate_l2) << std::fixed << std::setprecision(2)
        << r.wall_time << '\n';
  }
  for (const ConvergenceRecord& r : records) {
    if (!r.positive_definite) {
      out << "note: level " << r.level << " system is not positive definite; solved by pivoted LU\n";
    }
  }
  if (records.size() >= 2) {
    out << std::fixed << std::setprecision(3) << "least-squares rates (last " << std::min<std::size_t>(3, records.size())
        << " levels): energy " << least_squares_rate(records, ErrorKind::Energy) << ", h1 "
        << least_squares_rate(records, ErrorKind::H1) << ", l2 " << least_squares_rate(records, ErrorKind::L2)
        << ", delta " << least_squares_rate(records, ErrorKind::Delta) << '\n';
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unfitted Nitsche finite element solver for -Laplace(u) = 1 with convergence studies", "cutfem"};
  app.allow_config_extras(false);

  std::string command;
  StudyConfig cfg;
  std::string out_path = "results.csv";
  std::string norm = "energy";
  std::string geometry = "square";
  QuadratureOrders orders;

  const std::map<std::string, StudyKind> commands{{"delta-study", StudyKind::DeltaScaling},
                                                  {"normal-study", StudyKind::NormalApprox},
                                                  {"levelset-study", StudyKind::LevelSet},
                                                  {"solve", StudyKind::Single}};
  app.add_option("command", command, "delta-study | normal-study | levelset-study | solve")
      ->required()
      ->check(CLI::IsMember(commands));
  CLI::Option* degree = app.add_option("--p", cfg.p, "polynomial degree (default 1, or 2 for normal-study)")
                            ->check(CLI::Range(1, 3));
  app.add_option("--levels", cfg.levels, "refinement levels (default 5, or 4 for p = 3)")->check(CLI::PositiveNumber);
  app.add_option("--h0", cfg.h0, "coarsest mesh size (default: background side / 12)")->check(CLI::PositiveNumber);
  CLI::Option* alpha = app.add_option("--alpha", cfg.alpha, "delta = h^alpha (delta-study)");
  app.add_option("--alpha-n", cfg.alpha_n, "normal perturbation exponent (normal-study)")->check(CLI::NonNegativeNumber);
  app.add_option("--norm", norm, "delta scaling target of normal-study")->check(CLI::IsMember({"energy", "h1", "l2"}));
  app.add_option("--terms", cfg.n_terms, "series terms of the square reference (default 50, or 100 for p = 3)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "CSV output path");
  app.add_option("--vertex-density", cfg.vertex_density, "polygon vertices per unit of 1/h")->check(CLI::Range(4, 100000));
  app.add_option("--geometry", geometry, "solve: square | circle | levelset")
      ->check(CLI::IsMember({"square", "circle", "levelset"}));
  app.add_option("--delta", cfg.delta, "solve: perturbation amplitude")->check(CLI::NonNegativeNumber);
  CLI::Option* volume_order = app.add_option("--volume-order", orders.volume, "volume quadrature order");
  CLI::Option* boundary_order = app.add_option("--boundary-order", orders.boundary, "boundary quadrature order");
  CLI::Option* ghost_points = app.add_option("--ghost-points", orders.ghost_points, "Gauss points per ghost face");
  CLI::Option* error_order = app.add_option("--error-order", orders.error, "error-norm quadrature order");
  app.set_config("--config", "", "config file with key = value lines");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitBadArguments;
  }

  cfg.study = commands.at(command);
  if (cfg.study == StudyKind::NormalApprox && degree->count() == 0) cfg.p = 2;
  if (cfg.study == StudyKind::DeltaScaling && alpha->count() == 0) {
    err << "error: delta-study requires --alpha\n";
    return kExitBadArguments;
  }
  cfg.norm_target = norm == "h1" ? NormTarget::H1 : norm == "l2" ? NormTarget::L2 : NormTarget::Energy;
  cfg.geometry = geometry == "circle" ? Geometry::Circle : geometry == "levelset" ? Geometry::LevelSet : Geometry::Square;
  if (volume_order->count() + boundary_order->count() + ghost_points->count() + error_order->count() > 0) {
    QuadratureOrders resolved = QuadratureOrders::defaults(cfg.p);
    if (volume_order->count()) resolved.volume = orders.volume;
    if (boundary_order->count()) resolved.boundary = orders.boundary;
    if (ghost_points->count()) resolved.ghost_points = orders.ghost_points;
    if (error_order->count()) resolved.error = orders.error;
    if (std::min({resolved.volume, resolved.boundary, resolved.ghost_points, resolved.error}) < 1) {
      err << "error: quadrature orders must be positive\n";
      return kExitBadArguments;
    }
    cfg.orders = resolved;
  }
  try {
    cfg.validate();
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadArguments;
  }

  try {
    const std::vector<ConvergenceRecord> records = run_study(cfg);
    print_table(records, out);
    write_records_csv(records, out_path);
    out << "wrote " << records.size() << " records to " << out_path << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}

}  // namespace cutfem
