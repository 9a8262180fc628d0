/**
 * @file lp.hpp
 * @brief Linear-program data model and the continuous solver used for node
 *        relaxations.
 */

#ifndef GIP_LP_HPP
#define GIP_LP_HPP

#include <string>
#include <utility>
#include <vector>

#include "gip/errors.hpp"

namespace gip {

// Shared numeric tolerances.
constexpr double kFeasibilityTol = 1e-9;
constexpr double kIntegralityTol = 1e-7;
constexpr double kCutViolationTol = 1e-6;

enum class Sense : char { LessEqual = 'L', GreaterEqual = 'G', Equal = 'E' };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  bool is_integer = false; // binary when true; bounds stay within [0,1]
};

using SparseRow = std::vector<std::pair<int, double>>; // (variable id, coeff)

struct LinearConstraint {
  SparseRow row;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// Minimization MILP: variables with bounds and integrality flags, sparse
/// linear constraints, sparse objective.
class MilpModel {
public:
  int add_variable(std::string name, double lower, double upper,
                   bool is_integer);
  int add_constraint(SparseRow row, Sense sense, double rhs);
  void set_objective(SparseRow objective);

  /// Add to the objective coefficient of one variable.
  void add_objective_term(int var, double coeff);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const Variable &variable(int id) const {
    return variables_[static_cast<size_t>(id)];
  }
  const LinearConstraint &constraint(int id) const {
    return constraints_[static_cast<size_t>(id)];
  }
  const SparseRow &objective() const { return objective_; }

  void set_bounds(int var, double lower, double upper);
  void mark_integer(int var);
  void clear_integrality();
  bool has_integer_variables() const;

  /// Replace a constraint row in place (used when coverage rows gain
  /// selection variables); sense and rhs may change too.
  void replace_constraint(int id, SparseRow row, Sense sense, double rhs);

private:
  void check_row(const SparseRow &row) const;

  std::vector<Variable> variables_;
  std::vector<LinearConstraint> constraints_;
  SparseRow objective_;
};

/// Identical model with every integrality flag dropped.
MilpModel relax(const MilpModel &model);

struct LpSolution {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  std::vector<double> values;
  double objective = 0.0;
  long iterations = 0;
};

/// Deterministic work accounting used for reproducible time limits; units
/// are rough flop counts accumulated by the numeric kernels.
struct WorkMeter {
  double units = 0.0;
  void add(double u) { units += u; }
};

/**
 * @brief Solve a continuous LP with a two-phase bounded-variable revised
 *        simplex (Dantzig pricing, Bland fallback for stalls).
 *
 * The model must contain no integer variables; call relax() first. Returns a
 * vertex of the feasible region when Optimal.
 */
LpSolution solve_lp(const MilpModel &model, WorkMeter *meter = nullptr);

/// Write the model in LP text format; import_lp reads the same subset back.
void export_lp(const MilpModel &model, const std::string &path);
MilpModel import_lp(const std::string &path);

} // namespace gip

#endif // GIP_LP_HPP
