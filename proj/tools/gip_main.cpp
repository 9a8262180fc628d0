/**
 * @file gip_main.cpp
 * @brief Command line for the solver suite: instance generation, solving,
 *        verification, exhaustive optimum, and bound charts.
 *
 * Exit codes: 0 success, 2 usage or parse failure, 3 infeasible,
 * 4 resource guard, 5 verification failure.
 */

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gip/graph_algo.hpp"
#include "gip/json_io.hpp"
#include "gip/plot.hpp"
#include "gip/simulator.hpp"
#include "gip/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitResourceGuard = 4;
constexpr int kExitVerification = 5;

struct GenOptions {
  int n = 1000;
  int k = 50;
  int obstacles = 15;
  double fov_deg = 90.0;
  double range = 15.0;
  double step = 0.0; // 0 = bounds diagonal / 50
  double neighbor_radius = 0.0; // 0 = 1.5 * step
  double width = 100.0;
  double height = 100.0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenOptions &opt) {
  gip::Rect bounds{0.0, 0.0, opt.width, opt.height};
  gip::Workspace ws =
      gip::generate_workspace(opt.seed, bounds, opt.obstacles, opt.k);
  double diag = std::sqrt(opt.width * opt.width + opt.height * opt.height);
  double step = opt.step > 0.0 ? opt.step : diag / 50.0;
  double radius = opt.neighbor_radius > 0.0 ? opt.neighbor_radius : 1.5 * step;
  gip::Roadmap roadmap = gip::build_rrg(ws, opt.n, step, radius, opt.seed);
  gip::SensorModel sensor{opt.fov_deg * 3.14159265358979323846 / 360.0,
                          opt.range};
  gip::EmittedInstance emitted = gip::emit_instance(ws, roadmap, sensor);
  gip::save_instance(opt.out, emitted.instance, &emitted.coverage);
  gip::save_geometry(opt.out + ".geom.json", ws, sensor);

  int empty = static_cast<int>(emitted.instance.empty_groups().size());
  std::cout << "wrote " << opt.out << ": " << emitted.instance.num_vertices()
            << " vertices, " << emitted.instance.num_edges() << " edges, "
            << emitted.instance.num_groups() << " groups";
  if (empty > 0)
    std::cout << " (" << empty << " empty -> infeasible)";
  std::cout << "\n";
  return kExitOk;
}

struct SolveOptions {
  std::string instance;
  std::string formulation = "cutset";
  std::string oracle = "combined";
  bool oracle_given = false;
  int sample_size = 100;
  double time_limit = 500.0;
  std::string heuristic = "greedy";
  std::uint64_t seed = 0;
  long mcf_guard = 200000;
  std::string log_path;
  std::string report_path;
  std::string tour_path;
};

int run_solve(const SolveOptions &opt) {
  if (opt.formulation != "cutset" && opt.oracle_given) {
    std::cerr << "error: --oracle applies to --formulation cutset only\n";
    return kExitUsage;
  }

  gip::LoadedInstance loaded = gip::load_instance(opt.instance);
  const gip::GipInstance &inst = loaded.instance;

  gip::SolveParams params;
  params.time_limit_s = opt.time_limit;
  params.sample_size = opt.sample_size;
  params.rng_seed = opt.seed;
  if (opt.oracle == "cc")
    params.oracle = gip::OracleKind::Connectivity;
  else if (opt.oracle == "flow")
    params.oracle = gip::OracleKind::Flow;
  else
    params.oracle = gip::OracleKind::Combined;
  if (opt.heuristic == "greedy")
    params.heuristic = gip::covering_tree_hook(gip::MatchMode::Greedy);
  else if (opt.heuristic == "exact")
    params.heuristic = gip::covering_tree_hook(gip::MatchMode::Exact);

  std::ofstream csv;
  if (!opt.log_path.empty()) {
    csv.open(opt.log_path);
    if (!csv) {
      std::cerr << "error: cannot open " << opt.log_path << "\n";
      return kExitUsage;
    }
    params.csv_sink = &csv;
  }

  gip::SolverReport report;
  try {
    gip::FormulationHandle handle = gip::build_baseline(inst);
    if (opt.formulation == "scf") {
      report = gip::solve_bnb(gip::add_scf(std::move(handle)), params);
    } else if (opt.formulation == "mcf") {
      report = gip::solve_bnb(
          gip::add_mcf(std::move(handle), opt.mcf_guard), params);
    } else {
      report = gip::solve_bnc(gip::add_group_cutset(std::move(handle)), params);
    }
  } catch (const gip::Error &e) {
    if (e.code() == gip::ErrorCode::TooLarge) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitResourceGuard;
    }
    if (e.code() == gip::ErrorCode::EmptyGroup ||
        e.code() == gip::ErrorCode::InfeasibleModel) {
      std::cerr << "infeasible: " << e.what() << "\n";
      return kExitInfeasible;
    }
    throw;
  }

  if (!opt.report_path.empty())
    gip::save_report(opt.report_path, report);
  if (!opt.tour_path.empty() && report.incumbent)
    gip::save_tour(opt.tour_path, inst, *report.incumbent);
  std::cout << gip::report_to_json(report);

  if (report.termination == gip::SolverReport::Termination::Infeasible)
    return kExitInfeasible;
  if (report.termination == gip::SolverReport::Termination::TimeLimit &&
      !report.incumbent)
    return kExitInfeasible;
  return kExitOk;
}

int run_verify(const std::string &instance_path, const std::string &tour_path) {
  gip::LoadedInstance loaded = gip::load_instance(instance_path);
  gip::Tour tour = gip::load_tour(tour_path, loaded.instance);
  gip::VerifyResult verdict = gip::verify_tour(loaded.instance, tour);
  if (verdict.feasible()) {
    std::printf("feasible cost %.10g\n", verdict.cost);
    return kExitOk;
  }
  if (verdict.kind == gip::VerifyResult::Kind::GroupUncovered)
    std::printf("violation %s group %d\n", gip::to_string(verdict.kind).c_str(),
                verdict.group);
  else
    std::printf("violation %s\n", gip::to_string(verdict.kind).c_str());
  return kExitVerification;
}

int run_bruteforce(const std::string &instance_path, int max_edges,
                   const std::string &tour_out) {
  gip::LoadedInstance loaded = gip::load_instance(instance_path);
  gip::BruteForceResult best;
  try {
    best = gip::brute_force_optimum(loaded.instance, max_edges);
  } catch (const gip::Error &e) {
    if (e.code() == gip::ErrorCode::TooLarge) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitResourceGuard;
    }
    throw;
  }
  if (!best.feasible) {
    std::cout << "infeasible\n";
    return kExitInfeasible;
  }
  std::printf("optimum %.10g\n", best.cost);
  if (!tour_out.empty())
    gip::save_tour(tour_out, loaded.instance, best.tour);
  return kExitOk;
}

int run_plot(const std::string &log_path, const std::string &out_path) {
  std::vector<gip::CsvLogRow> rows = gip::parse_bounds_csv(log_path);
  gip::render_bounds_svg(rows, out_path);
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Graph inspection planning solver suite"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App *cmd_gen = app.add_subcommand("gen", "generate a simulator instance");
  cmd_gen->add_option("--n", gen.n, "roadmap vertices")->check(CLI::PositiveNumber);
  cmd_gen->add_option("--k", gen.k, "POI count")->check(CLI::NonNegativeNumber);
  cmd_gen->add_option("--obstacles", gen.obstacles, "L-shaped obstacle count")
      ->check(CLI::NonNegativeNumber);
  cmd_gen->add_option("--fov-deg", gen.fov_deg, "full field of view, degrees");
  cmd_gen->add_option("--range", gen.range, "inspection range");
  cmd_gen->add_option("--step", gen.step, "RRG steering step (0 = auto)");
  cmd_gen->add_option("--neighbor-radius", gen.neighbor_radius,
                      "RRG connection radius (0 = 1.5 * step)");
  cmd_gen->add_option("--width", gen.width, "workspace width");
  cmd_gen->add_option("--height", gen.height, "workspace height");
  cmd_gen->add_option("--seed", gen.seed, "generator seed");
  cmd_gen->add_option("--out", gen.out, "instance file")->required();

  SolveOptions solve;
  CLI::App *cmd_solve = app.add_subcommand("solve", "solve an instance");
  cmd_solve->add_option("--instance", solve.instance, "instance file")->required();
  cmd_solve->add_option("--formulation", solve.formulation)
      ->check(CLI::IsMember({"scf", "mcf", "cutset"}));
  cmd_solve->add_option("--oracle", solve.oracle)
      ->check(CLI::IsMember({"cc", "flow", "combined"}));
  cmd_solve->add_option("--sample-size", solve.sample_size)
      ->check(CLI::PositiveNumber);
  cmd_solve->add_option("--time-limit", solve.time_limit, "seconds")
      ->check(CLI::NonNegativeNumber);
  cmd_solve->add_option("--heuristic", solve.heuristic)
      ->check(CLI::IsMember({"greedy", "exact", "off"}));
  cmd_solve->add_option("--seed", solve.seed, "oracle sampling seed");
  cmd_solve->add_option("--mcf-guard", solve.mcf_guard,
                        "flow-variable memory guard");
  cmd_solve->add_option("--log", solve.log_path, "anytime CSV log");
  cmd_solve->add_option("--out-report", solve.report_path, "report JSON");
  cmd_solve->add_option("--out-tour", solve.tour_path, "tour JSON");

  std::string verify_instance, verify_tour_path;
  CLI::App *cmd_verify = app.add_subcommand("verify", "verify a tour file");
  cmd_verify->add_option("--instance", verify_instance)->required();
  cmd_verify->add_option("--tour", verify_tour_path)->required();

  std::string bf_instance, bf_tour_out;
  int bf_max_edges = 22;
  CLI::App *cmd_bf = app.add_subcommand("bruteforce", "exhaustive optimum");
  cmd_bf->add_option("--instance", bf_instance)->required();
  cmd_bf->add_option("--max-edges", bf_max_edges);
  cmd_bf->add_option("--out-tour", bf_tour_out);

  std::string plot_log, plot_out;
  CLI::App *cmd_plot = app.add_subcommand("plot", "render a bound chart");
  cmd_plot->add_option("--log", plot_log)->required();
  cmd_plot->add_option("--out", plot_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_gen->parsed())
      return run_gen(gen);
    if (cmd_solve->parsed()) {
      solve.oracle_given = cmd_solve->count("--oracle") > 0;
      return run_solve(solve);
    }
    if (cmd_verify->parsed())
      return run_verify(verify_instance, verify_tour_path);
    if (cmd_bf->parsed())
      return run_bruteforce(bf_instance, bf_max_edges, bf_tour_out);
    if (cmd_plot->parsed())
      return run_plot(plot_log, plot_out);
  } catch (const gip::Error &e) {
    if (e.code() == gip::ErrorCode::ParseError) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    if (e.code() == gip::ErrorCode::TooLarge) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitResourceGuard;
    }
    if (e.code() == gip::ErrorCode::PlacementFailure) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitResourceGuard;
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
