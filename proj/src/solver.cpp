#include "gip/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <random>
#include <set>

#include "gip/graph_algo.hpp"
#include "gip/separation.hpp"

namespace gip {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPruneTol = 1e-6;
constexpr double kIncumbentTol = 1e-9;
// Deterministic work-unit budget: one "second" of time limit corresponds to
// this many accounted floating-point operations, so identical runs stop at
// identical points regardless of machine load.
constexpr double kWorkUnitsPerSecond = 2.5e8;
constexpr int kHeuristicNodeInterval = 20;
constexpr int kMaxSeparationRounds = 1000;
} // namespace

SolverReport::SolverReport()
    : upper_bound(kInf), lower_bound(-kInf),
      gap_pct(std::numeric_limits<double>::quiet_NaN()) {}

std::string to_string(SolverReport::Termination t) {
  switch (t) {
  case SolverReport::Termination::Optimal:
    return "optimal";
  case SolverReport::Termination::TimeLimit:
    return "time_limit";
  case SolverReport::Termination::Infeasible:
    return "infeasible";
  }
  return "?";
}

double optimality_gap_pct(double upper, double lower) {
  if (!std::isfinite(upper) || upper <= 0.0 || !std::isfinite(lower))
    return std::numeric_limits<double>::quiet_NaN();
  return 100.0 * (upper - lower) / upper;
}

void write_csv_header(std::ostream &csv) { csv << "elapsed_s,ub,lb,gap_pct,event\n"; }

namespace {
void write_csv_row(std::ostream &csv, const BoundRow &row) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.3f,%.10g,%.10g,%.10g,%s\n", row.elapsed_s,
                row.upper, row.lower, row.gap_pct, row.event.c_str());
  csv << buf;
}
} // namespace

void record_bounds(SolverReport &report, double elapsed_s, double upper,
                   double lower, const std::string &event, std::ostream *csv) {
  report.upper_bound = std::min(report.upper_bound, upper);
  report.lower_bound = std::max(report.lower_bound, lower);
  report.gap_pct = optimality_gap_pct(report.upper_bound, report.lower_bound);
  BoundRow row{elapsed_s, report.upper_bound, report.lower_bound,
               report.gap_pct, event};
  report.log.push_back(row);
  if (csv)
    write_csv_row(*csv, report.log.back());
}

HeuristicHook covering_tree_hook(MatchMode mode) {
  return [mode](const GipInstance &inst, const std::vector<double> *lp_values)
             -> std::optional<HeuristicResult> {
    try {
      return run_heuristic(inst, lp_values, mode);
    } catch (const Error &) {
      return std::nullopt; // unreachable groups or no realization: no tour
    }
  };
}

// ---------------------------------------------------------------------------
// Search engine
// ---------------------------------------------------------------------------

namespace {

struct SearchNode {
  long id = 0;
  double bound = -kInf;
  int depth = 0;
  std::vector<std::pair<int, double>> fixings;
};

struct NodeWorse {
  bool operator()(const SearchNode &a, const SearchNode &b) const {
    if (a.bound != b.bound)
      return a.bound > b.bound; // smaller bound first
    if (a.depth != b.depth)
      return a.depth < b.depth; // deeper first
    return a.id > b.id;         // older first
  }
};

class SearchEngine {
public:
  SearchEngine(const FormulationHandle &handle, const SolveParams &params,
               bool lazy)
      : handle_(handle), inst_(*handle.instance), params_(params), lazy_(lazy),
        model_(handle.model), rng_(params.rng_seed),
        start_(std::chrono::steady_clock::now()) {}

  SolverReport run();

private:
  double wall_elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }
  double budget_elapsed() const { return meter_.units / kWorkUnitsPerSecond; }
  bool out_of_budget() const {
    return budget_elapsed() >= params_.time_limit_s ||
           wall_elapsed() > 3.0 * params_.time_limit_s + 30.0;
  }

  void record(double upper, double lower, const std::string &event) {
    record_bounds(report_, wall_elapsed(), upper, lower, event,
                  params_.csv_sink);
  }

  double open_minimum(double processing_bound) const {
    double lb = processing_bound;
    if (!open_bounds_.empty())
      lb = std::min(lb, *open_bounds_.begin());
    if (lb == kInf)
      return report_.lower_bound; // no open nodes left: nothing new to claim
    return lb;
  }

  std::vector<double> edge_values(const LpSolution &sol) const {
    std::vector<double> values(static_cast<size_t>(inst_.num_edges()));
    for (EdgeId e = 0; e < inst_.num_edges(); ++e)
      values[static_cast<size_t>(e)] = std::clamp(
          sol.values[static_cast<size_t>(
              handle_.edge_var[static_cast<size_t>(e)])],
          0.0, 1.0);
    return values;
  }

  std::vector<int> active_groups(const LpSolution &sol) const {
    std::vector<int> ids;
    if (!handle_.partial_q) {
      ids.resize(static_cast<size_t>(inst_.num_groups()));
      for (int i = 0; i < inst_.num_groups(); ++i)
        ids[static_cast<size_t>(i)] = i;
      return ids;
    }
    for (int i = 0; i < inst_.num_groups(); ++i) {
      int z = handle_.group_select_var[static_cast<size_t>(i)];
      if (sol.values[static_cast<size_t>(z)] >= 0.5)
        ids.push_back(i);
    }
    return ids;
  }

  bool add_cut(const Cut &cut, MilpModel &node_model) {
    std::vector<EdgeId> key = cut.leaving_edges;
    std::sort(key.begin(), key.end());
    if (handle_.partial_q)
      key.push_back(-1 - cut.excluded_group); // conditional rows differ per group
    if (!cut_keys_.insert(key).second)
      return false;
    SparseRow row;
    for (EdgeId e : cut.leaving_edges)
      row.push_back({handle_.edge_var[static_cast<size_t>(e)], 1.0});
    double rhs = 1.0;
    if (handle_.partial_q) {
      // Conditional form: the cut binds only when the excluded group is
      // selected for coverage.
      row.push_back(
          {handle_.group_select_var[static_cast<size_t>(cut.excluded_group)],
           -1.0});
      rhs = 0.0;
    }
    model_.add_constraint(row, Sense::GreaterEqual, rhs);
    node_model.add_constraint(row, Sense::GreaterEqual, rhs);
    ++report_.cuts_added;
    return true;
  }

  void try_selection_incumbent(const std::vector<double> &values,
                               double processing_bound);
  void try_tour_incumbent(const Tour &tour, double processing_bound);
  void run_hook(const std::vector<double> *lp_values, double processing_bound);

  LpSolution solve_node_lp(MilpModel &node_model) {
    ++report_.lp_solves;
    MilpModel relaxed = relax(node_model);
    return solve_lp(relaxed, &meter_);
  }

  const FormulationHandle &handle_;
  const GipInstance &inst_;
  const SolveParams &params_;
  bool lazy_;
  MilpModel model_; // working copy; lazy rows are appended here
  std::mt19937_64 rng_;
  std::chrono::steady_clock::time_point start_;
  WorkMeter meter_;
  SolverReport report_;
  std::priority_queue<SearchNode, std::vector<SearchNode>, NodeWorse> queue_;
  std::multiset<double> open_bounds_;
  std::set<std::vector<EdgeId>> cut_keys_;
  long next_node_id_ = 0;
};

void SearchEngine::try_tour_incumbent(const Tour &tour,
                                      double processing_bound) {
  double cost;
  if (handle_.partial_q) {
    std::vector<char> covered;
    VerifyResult structure = verify_walk_structure(inst_, tour, &covered);
    if (!structure.feasible())
      return;
    int count = 0;
    for (char c : covered)
      count += c != 0;
    if (count < *handle_.partial_q)
      return;
    cost = structure.cost;
  } else {
    VerifyResult verdict = verify_tour(inst_, tour);
    if (!verdict.feasible())
      return;
    cost = verdict.cost;
  }
  if (cost < report_.upper_bound - kIncumbentTol) {
    report_.incumbent = tour;
    record(cost, open_minimum(processing_bound), "incumbent");
  }
}

void SearchEngine::try_selection_incumbent(const std::vector<double> &values,
                                           double processing_bound) {
  std::vector<char> selected(static_cast<size_t>(inst_.num_edges()), 0);
  for (EdgeId e = 0; e < inst_.num_edges(); ++e)
    selected[static_cast<size_t>(e)] =
        values[static_cast<size_t>(e)] > 0.5 ? 1 : 0;
  // Components disconnected from the root are dropped; the remaining
  // selection stays balanced and feasible, at no larger cost.
  std::vector<char> kept = root_component_edges(inst_, selected, inst_.root());
  Tour tour;
  try {
    tour = eulerian_circuit(inst_, kept, inst_.root());
  } catch (const Error &) {
    return;
  }
  if (tour.edges.empty())
    return;
  try_tour_incumbent(tour, processing_bound);
}

void SearchEngine::run_hook(const std::vector<double> *lp_values,
                            double processing_bound) {
  if (!params_.heuristic)
    return;
  auto result = params_.heuristic(inst_, lp_values);
  // Deterministic cost estimate for the budget: an all-pairs pass plus the
  // per-step searches, all about one Dijkstra each.
  double v = inst_.num_vertices(), e = inst_.num_edges();
  double sssp = (e + v) * std::log2(v + 2.0);
  meter_.add(v <= kFullMatrixVertexLimit ? v * sssp : 64.0 * sssp);
  if (result)
    try_tour_incumbent(result->tour, processing_bound);
}

SolverReport SearchEngine::run() {
  if (params_.csv_sink)
    write_csv_header(*params_.csv_sink);
  if (params_.sample_size < 1)
    throw Error(ErrorCode::OutOfRange, "sample size must be at least one");

  // A first incumbent before any LP work keeps the anytime contract useful
  // even under a zero time limit.
  run_hook(nullptr, -kInf);

  queue_.push(SearchNode{next_node_id_++, -kInf, 0, {}});
  open_bounds_.insert(-kInf);

  bool budget_exhausted = false;
  while (!queue_.empty()) {
    SearchNode node = queue_.top();
    queue_.pop();
    open_bounds_.erase(open_bounds_.find(node.bound));

    // The root always runs so a report carries at least the root bound;
    // afterwards the deterministic budget is enforced between nodes.
    if (node.id != 0 && out_of_budget()) {
      budget_exhausted = true;
      break;
    }
    if (node.bound >= report_.upper_bound - kPruneTol) {
      // Best-bound order: every remaining node proves at least this bound.
      while (!queue_.empty())
        queue_.pop();
      open_bounds_.clear();
      break;
    }

    MilpModel node_model = model_;
    for (const auto &[var, value] : node.fixings)
      node_model.set_bounds(var, value, value);

    LpSolution lp = solve_node_lp(node_model);
    ++report_.nodes_processed;
    bool is_root = node.id == 0;

    if (lp.status != LpSolution::Status::Optimal) {
      if (is_root)
        throw Error(ErrorCode::InfeasibleModel, "root relaxation is infeasible");
      record(report_.upper_bound, open_minimum(kInf), "node");
      continue;
    }
    if (is_root) {
      record(report_.upper_bound, lp.objective, "root_lp");
      std::vector<double> values = edge_values(lp);
      run_hook(&values, lp.objective);
    }
    if (lp.objective >= report_.upper_bound - kPruneTol) {
      record(report_.upper_bound, open_minimum(lp.objective), "node");
      continue;
    }

    // Lazy separation: integral candidates must pass the connectivity
    // oracle; fractional ones get one round of flow separation per node.
    bool fathomed = false;
    bool fractional_round_done = false;
    if (lazy_) {
      for (int round = 0; round < kMaxSeparationRounds; ++round) {
        if (out_of_budget()) {
          budget_exhausted = true;
          break;
        }
        Candidate cand = make_candidate(inst_, edge_values(lp));
        bool added = false;
        if (cand.integral) {
          std::vector<int> ids = active_groups(lp);
          meter_.add(static_cast<double>(inst_.num_groups()) *
                         inst_.num_vertices() +
                     inst_.num_edges());
          auto cut = separate_connectivity(inst_, cand, &ids);
          if (cut)
            added = add_cut(*cut, node_model);
        } else if (params_.oracle != OracleKind::Connectivity &&
                   !fractional_round_done) {
          fractional_round_done = true;
          std::vector<int> ids = active_groups(lp);
          std::vector<Cut> cuts;
          if (params_.oracle == OracleKind::Flow) {
            cuts = separate_flow(inst_, cand, ids);
            meter_.add(static_cast<double>(ids.size()) * 10.0 *
                       (inst_.num_edges() + inst_.num_vertices()));
          } else {
            cuts = separate_combined(inst_, cand, params_.sample_size, rng_(),
                                     &ids);
            meter_.add(std::min<double>(params_.sample_size,
                                        static_cast<double>(ids.size())) *
                       10.0 * (inst_.num_edges() + inst_.num_vertices()));
          }
          for (const Cut &cut : cuts)
            added = add_cut(cut, node_model) || added;
        }
        if (!added)
          break;
        lp = solve_node_lp(node_model);
        if (lp.status != LpSolution::Status::Optimal) {
          record(report_.upper_bound, open_minimum(kInf), "node");
          fathomed = true;
          break;
        }
        record(report_.upper_bound, open_minimum(lp.objective), "cut");
        if (lp.objective >= report_.upper_bound - kPruneTol) {
          record(report_.upper_bound, open_minimum(lp.objective), "node");
          fathomed = true;
          break;
        }
      }
    }
    if (budget_exhausted)
      break;
    if (fathomed)
      continue;

    std::vector<double> values = edge_values(lp);
    Candidate cand = make_candidate(inst_, values);
    if (cand.integral) {
      try_selection_incumbent(values, lp.objective);
      record(report_.upper_bound, open_minimum(kInf), "node");
      continue;
    }

    // Branch on the most fractional binary; ties fall to the lowest id.
    int branch_var = -1;
    double best_frac = kIntegralityTol;
    for (int j = 0; j < model_.num_variables(); ++j) {
      if (!model_.variable(j).is_integer)
        continue;
      double v = lp.values[static_cast<size_t>(j)];
      double frac = std::min(v, 1.0 - v);
      if (frac > best_frac) {
        best_frac = frac;
        branch_var = j;
      }
    }
    if (branch_var < 0) {
      // Edge variables are integral but auxiliaries are not; accept the
      // selection anyway (it satisfies every constraint family).
      try_selection_incumbent(values, lp.objective);
      record(report_.upper_bound, open_minimum(kInf), "node");
      continue;
    }
    for (double fixed : {0.0, 1.0}) {
      SearchNode child;
      child.id = next_node_id_++;
      child.bound = lp.objective;
      child.depth = node.depth + 1;
      child.fixings = node.fixings;
      child.fixings.push_back({branch_var, fixed});
      queue_.push(std::move(child));
      open_bounds_.insert(lp.objective);
    }
    record(report_.upper_bound, open_minimum(lp.objective), "node");

    if (report_.nodes_processed % kHeuristicNodeInterval == 0)
      run_hook(&values, lp.objective);
  }

  report_.wall_seconds = wall_elapsed();
  if (budget_exhausted) {
    report_.termination = SolverReport::Termination::TimeLimit;
    record(report_.upper_bound, report_.lower_bound, "final");
  } else if (report_.incumbent) {
    report_.termination = SolverReport::Termination::Optimal;
    record(report_.upper_bound, report_.upper_bound, "final");
  } else {
    report_.termination = SolverReport::Termination::Infeasible;
    record(report_.upper_bound, report_.lower_bound, "final");
  }
  report_.wall_seconds = wall_elapsed();
  return report_;
}

} // namespace

SolverReport solve_bnb(const FormulationHandle &handle,
                       const SolveParams &params) {
  if (handle.flavor != Flavor::Scf && handle.flavor != Flavor::Mcf)
    throw Error(ErrorCode::WrongFlavor,
                "branch and bound needs a fully instantiated flavor; "
                "group-cutset models go through solve_bnc");
  SearchEngine engine(handle, params, /*lazy=*/false);
  return engine.run();
}

SolverReport solve_bnc(const FormulationHandle &handle,
                       const SolveParams &params) {
  if (handle.flavor != Flavor::GroupCutset)
    throw Error(ErrorCode::WrongFlavor,
                "branch and cut runs on the group-cutset flavor only");
  SearchEngine engine(handle, params, /*lazy=*/true);
  return engine.run();
}

} // namespace gip
