/**
 * @file solver.hpp
 * @brief Branch-and-bound core and the branch-and-cut extension with lazy
 *        group-cutset separation, incumbent management and bound logging.
 */

#ifndef GIP_SOLVER_HPP
#define GIP_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gip/formulation.hpp"
#include "gip/heuristic.hpp"
#include "gip/instance.hpp"

namespace gip {

enum class OracleKind { Connectivity, Flow, Combined };

struct BoundRow {
  double elapsed_s = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double gap_pct = 0.0;
  std::string event; // root_lp | incumbent | cut | node | final
};

struct SolverReport {
  enum class Termination { Optimal, TimeLimit, Infeasible };

  std::optional<Tour> incumbent;
  double upper_bound;
  double lower_bound;
  double gap_pct;
  std::vector<BoundRow> log;
  Termination termination = Termination::Infeasible;
  double wall_seconds = 0.0;
  long nodes_processed = 0;
  long cuts_added = 0;
  long lp_solves = 0;

  SolverReport();
};

std::string to_string(SolverReport::Termination t);

/// Optimality gap in percent; NaN unless the upper bound is finite positive.
double optimality_gap_pct(double upper, double lower);

/**
 * @brief Append a bound row, clamping for monotonicity.
 *
 * The stored upper bound never increases and the lower bound never
 * decreases across rows; the gap is recomputed from the clamped values.
 * When `csv` is given the row is streamed immediately.
 */
void record_bounds(SolverReport &report, double elapsed_s, double upper,
                   double lower, const std::string &event,
                   std::ostream *csv = nullptr);

void write_csv_header(std::ostream &csv);

/// Primal heuristic hook: instance plus optional per-edge LP values;
/// empty result means no tour was produced.
using HeuristicHook = std::function<std::optional<HeuristicResult>(
    const GipInstance &, const std::vector<double> *)>;

/// Heuristic hook running the covering-tree heuristic in the given mode.
HeuristicHook covering_tree_hook(MatchMode mode);

struct SolveParams {
  double time_limit_s = 500.0; // deterministic work-meter seconds
  OracleKind oracle = OracleKind::Combined;
  int sample_size = 100;
  std::uint64_t rng_seed = 0;
  HeuristicHook heuristic; // empty = no primal heuristic
  std::ostream *csv_sink = nullptr;
};

/// Branch and bound over a fully instantiated flavor (SCF or MCF).
SolverReport solve_bnb(const FormulationHandle &handle,
                       const SolveParams &params);

/// Branch and cut over the group-cutset flavor with lazy separation.
SolverReport solve_bnc(const FormulationHandle &handle,
                       const SolveParams &params);

} // namespace gip

#endif // GIP_SOLVER_HPP
