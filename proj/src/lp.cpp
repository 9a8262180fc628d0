#include "gip/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace gip {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;
constexpr double kArtificialTol = 1e-7;
} // namespace

int MilpModel::add_variable(std::string name, double lower, double upper,
                            bool is_integer) {
  if (lower > upper)
    throw Error(ErrorCode::OutOfRange, "variable bounds crossed: " + name);
  if (is_integer && (lower < -kFeasibilityTol || upper > 1.0 + kFeasibilityTol))
    throw Error(ErrorCode::OutOfRange,
                "binary variable bounds must stay within [0,1]: " + name);
  variables_.push_back({std::move(name), lower, upper, is_integer});
  return num_variables() - 1;
}

void MilpModel::check_row(const SparseRow &row) const {
  for (const auto &[var, coeff] : row) {
    (void)coeff;
    if (var < 0 || var >= num_variables())
      throw Error(ErrorCode::UnknownVariable,
                  "constraint references unknown variable id " +
                      std::to_string(var),
                  var);
  }
}

int MilpModel::add_constraint(SparseRow row, Sense sense, double rhs) {
  check_row(row);
  constraints_.push_back({std::move(row), sense, rhs});
  return num_constraints() - 1;
}

void MilpModel::set_objective(SparseRow objective) {
  check_row(objective);
  objective_ = std::move(objective);
}

void MilpModel::add_objective_term(int var, double coeff) {
  if (var < 0 || var >= num_variables())
    throw Error(ErrorCode::UnknownVariable,
                "objective references unknown variable id " + std::to_string(var),
                var);
  for (auto &[v, c] : objective_) {
    if (v == var) {
      c += coeff;
      return;
    }
  }
  objective_.push_back({var, coeff});
}

void MilpModel::set_bounds(int var, double lower, double upper) {
  if (var < 0 || var >= num_variables())
    throw Error(ErrorCode::UnknownVariable, "unknown variable id", var);
  if (lower > upper)
    throw Error(ErrorCode::OutOfRange, "variable bounds crossed");
  variables_[static_cast<size_t>(var)].lower = lower;
  variables_[static_cast<size_t>(var)].upper = upper;
}

void MilpModel::mark_integer(int var) {
  if (var < 0 || var >= num_variables())
    throw Error(ErrorCode::UnknownVariable, "unknown variable id", var);
  variables_[static_cast<size_t>(var)].is_integer = true;
}

void MilpModel::clear_integrality() {
  for (auto &v : variables_)
    v.is_integer = false;
}

bool MilpModel::has_integer_variables() const {
  return std::any_of(variables_.begin(), variables_.end(),
                     [](const Variable &v) { return v.is_integer; });
}

void MilpModel::replace_constraint(int id, SparseRow row, Sense sense,
                                   double rhs) {
  if (id < 0 || id >= num_constraints())
    throw Error(ErrorCode::UnknownVariable, "unknown constraint id", id);
  check_row(row);
  constraints_[static_cast<size_t>(id)] = {std::move(row), sense, rhs};
}

MilpModel relax(const MilpModel &model) {
  MilpModel copy = model;
  copy.clear_integrality();
  return copy;
}

// ---------------------------------------------------------------------------
// Bounded-variable two-phase revised simplex with an explicit basis inverse.
// ---------------------------------------------------------------------------

namespace {

enum class ColState : char { Basic, AtLower, AtUpper, Free };

class SimplexKernel {
public:
  SimplexKernel(const MilpModel &model, WorkMeter *meter, bool bland_from_start)
      : model_(model), meter_(meter), bland_always_(bland_from_start) {
    build();
  }

  LpSolution run();

private:
  void build();
  void start_basis();
  void refactorize();
  void recompute_basic_values();
  double column_dot(int col, const std::vector<double> &y) const;
  void ftran(int col, std::vector<double> &w) const;
  bool price(int &entering, double &dj, const std::vector<double> &cost,
             bool bland) const;
  int iterate_phase(const std::vector<double> &cost, bool phase_one,
                    double stop_below);
  double nonbasic_value(int j) const;
  double current_objective(const std::vector<double> &cost) const;
  bool drive_out_artificials();
  bool verify_primal(const std::vector<double> &x) const;

  const MilpModel &model_;
  WorkMeter *meter_;
  bool bland_always_;

  int m_ = 0;        // rows
  int n_struct_ = 0; // structural columns
  int n_total_ = 0;  // structural + slack + artificial
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lb_, ub_;
  std::vector<double> b_;
  std::vector<ColState> state_;
  std::vector<int> basis_;     // column id per row
  std::vector<int> basic_pos_; // row of a basic column, -1 otherwise
  std::vector<double> xb_;
  std::vector<std::vector<double>> binv_;
  long iterations_ = 0;
  long pivots_since_refactor_ = 0;
  double total_nnz_ = 0.0;
};

void SimplexKernel::build() {
  m_ = model_.num_constraints();
  n_struct_ = model_.num_variables();
  n_total_ = n_struct_ + 2 * m_;
  cols_.assign(static_cast<size_t>(n_total_), {});
  lb_.assign(static_cast<size_t>(n_total_), 0.0);
  ub_.assign(static_cast<size_t>(n_total_), 0.0);
  b_.assign(static_cast<size_t>(m_), 0.0);

  for (int j = 0; j < n_struct_; ++j) {
    lb_[static_cast<size_t>(j)] = model_.variable(j).lower;
    ub_[static_cast<size_t>(j)] = model_.variable(j).upper;
  }
  for (int i = 0; i < m_; ++i) {
    const LinearConstraint &c = model_.constraint(i);
    for (const auto &[var, coeff] : c.row) {
      if (coeff != 0.0)
        cols_[static_cast<size_t>(var)].push_back({i, coeff});
    }
    b_[static_cast<size_t>(i)] = c.rhs;
    int slack = n_struct_ + i;
    cols_[static_cast<size_t>(slack)] = {{i, 1.0}};
    switch (c.sense) {
    case Sense::LessEqual:
      lb_[static_cast<size_t>(slack)] = 0.0;
      ub_[static_cast<size_t>(slack)] = kInf;
      break;
    case Sense::GreaterEqual:
      lb_[static_cast<size_t>(slack)] = -kInf;
      ub_[static_cast<size_t>(slack)] = 0.0;
      break;
    case Sense::Equal:
      lb_[static_cast<size_t>(slack)] = 0.0;
      ub_[static_cast<size_t>(slack)] = 0.0;
      break;
    }
  }
  for (size_t j = 0; j < cols_.size(); ++j)
    total_nnz_ += static_cast<double>(cols_[j].size());
}

double SimplexKernel::nonbasic_value(int j) const {
  switch (state_[static_cast<size_t>(j)]) {
  case ColState::AtLower:
    return lb_[static_cast<size_t>(j)];
  case ColState::AtUpper:
    return ub_[static_cast<size_t>(j)];
  case ColState::Free:
    return 0.0;
  case ColState::Basic:
    break;
  }
  return xb_[static_cast<size_t>(basic_pos_[static_cast<size_t>(j)])];
}

void SimplexKernel::start_basis() {
  state_.assign(static_cast<size_t>(n_total_), ColState::AtLower);
  basic_pos_.assign(static_cast<size_t>(n_total_), -1);
  for (int j = 0; j < n_struct_ + m_; ++j) {
    if (std::isfinite(lb_[static_cast<size_t>(j)]))
      state_[static_cast<size_t>(j)] = ColState::AtLower;
    else if (std::isfinite(ub_[static_cast<size_t>(j)]))
      state_[static_cast<size_t>(j)] = ColState::AtUpper;
    else
      state_[static_cast<size_t>(j)] = ColState::Free;
  }

  // Row residuals decide the artificial column signs, so every artificial
  // starts basic at a nonnegative value.
  std::vector<double> residual = b_;
  for (int j = 0; j < n_struct_ + m_; ++j) {
    double x = nonbasic_value(j);
    if (x == 0.0)
      continue;
    for (const auto &[row, coeff] : cols_[static_cast<size_t>(j)])
      residual[static_cast<size_t>(row)] -= coeff * x;
  }

  basis_.assign(static_cast<size_t>(m_), -1);
  xb_.assign(static_cast<size_t>(m_), 0.0);
  binv_.assign(static_cast<size_t>(m_), std::vector<double>(static_cast<size_t>(m_), 0.0));
  for (int i = 0; i < m_; ++i) {
    int art = n_struct_ + m_ + i;
    double sigma = residual[static_cast<size_t>(i)] >= 0.0 ? 1.0 : -1.0;
    cols_[static_cast<size_t>(art)] = {{i, sigma}};
    lb_[static_cast<size_t>(art)] = 0.0;
    ub_[static_cast<size_t>(art)] = kInf;
    basis_[static_cast<size_t>(i)] = art;
    basic_pos_[static_cast<size_t>(art)] = i;
    state_[static_cast<size_t>(art)] = ColState::Basic;
    xb_[static_cast<size_t>(i)] = std::abs(residual[static_cast<size_t>(i)]);
    binv_[static_cast<size_t>(i)][static_cast<size_t>(i)] = sigma;
  }
}

double SimplexKernel::column_dot(int col, const std::vector<double> &y) const {
  double acc = 0.0;
  for (const auto &[row, coeff] : cols_[static_cast<size_t>(col)])
    acc += coeff * y[static_cast<size_t>(row)];
  return acc;
}

void SimplexKernel::ftran(int col, std::vector<double> &w) const {
  w.assign(static_cast<size_t>(m_), 0.0);
  for (const auto &[row, coeff] : cols_[static_cast<size_t>(col)]) {
    const auto &binv_col = row; // binv_ * e_row picks column `row`
    for (int i = 0; i < m_; ++i)
      w[static_cast<size_t>(i)] +=
          coeff * binv_[static_cast<size_t>(i)][static_cast<size_t>(binv_col)];
  }
}

void SimplexKernel::refactorize() {
  // Gauss-Jordan inverse of the basis matrix.
  std::vector<std::vector<double>> a(
      static_cast<size_t>(m_), std::vector<double>(static_cast<size_t>(2 * m_), 0.0));
  for (int i = 0; i < m_; ++i) {
    for (const auto &[row, coeff] : cols_[static_cast<size_t>(basis_[static_cast<size_t>(i)])])
      a[static_cast<size_t>(row)][static_cast<size_t>(i)] = coeff;
    a[static_cast<size_t>(i)][static_cast<size_t>(m_ + i)] = 1.0;
  }
  for (int col = 0; col < m_; ++col) {
    int pivot_row = col;
    double best = std::abs(a[static_cast<size_t>(col)][static_cast<size_t>(col)]);
    for (int r = col + 1; r < m_; ++r) {
      double v = std::abs(a[static_cast<size_t>(r)][static_cast<size_t>(col)]);
      if (v > best) {
        best = v;
        pivot_row = r;
      }
    }
    if (best < 1e-12)
      throw Error(ErrorCode::NumericalFailure, "singular basis during refactorization");
    std::swap(a[static_cast<size_t>(col)], a[static_cast<size_t>(pivot_row)]);
    double pivot = a[static_cast<size_t>(col)][static_cast<size_t>(col)];
    for (int k = col; k < 2 * m_; ++k)
      a[static_cast<size_t>(col)][static_cast<size_t>(k)] /= pivot;
    for (int r = 0; r < m_; ++r) {
      if (r == col)
        continue;
      double factor = a[static_cast<size_t>(r)][static_cast<size_t>(col)];
      if (factor == 0.0)
        continue;
      for (int k = col; k < 2 * m_; ++k)
        a[static_cast<size_t>(r)][static_cast<size_t>(k)] -=
            factor * a[static_cast<size_t>(col)][static_cast<size_t>(k)];
    }
  }
  for (int i = 0; i < m_; ++i)
    for (int k = 0; k < m_; ++k)
      binv_[static_cast<size_t>(i)][static_cast<size_t>(k)] =
          a[static_cast<size_t>(i)][static_cast<size_t>(m_ + k)];
  if (meter_)
    meter_->add(2.0 * static_cast<double>(m_) * m_ * m_);
  pivots_since_refactor_ = 0;
  recompute_basic_values();
}

void SimplexKernel::recompute_basic_values() {
  std::vector<double> rhs = b_;
  for (int j = 0; j < n_total_; ++j) {
    if (state_[static_cast<size_t>(j)] == ColState::Basic)
      continue;
    double x = nonbasic_value(j);
    if (x == 0.0)
      continue;
    for (const auto &[row, coeff] : cols_[static_cast<size_t>(j)])
      rhs[static_cast<size_t>(row)] -= coeff * x;
  }
  for (int i = 0; i < m_; ++i) {
    double acc = 0.0;
    for (int k = 0; k < m_; ++k)
      acc += binv_[static_cast<size_t>(i)][static_cast<size_t>(k)] * rhs[static_cast<size_t>(k)];
    xb_[static_cast<size_t>(i)] = acc;
  }
}

bool SimplexKernel::price(int &entering, double &dj,
                          const std::vector<double> &cost, bool bland) const {
  // y = cB' * Binv
  std::vector<double> y(static_cast<size_t>(m_), 0.0);
  for (int i = 0; i < m_; ++i) {
    double cb = cost[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
    if (cb == 0.0)
      continue;
    for (int k = 0; k < m_; ++k)
      y[static_cast<size_t>(k)] += cb * binv_[static_cast<size_t>(i)][static_cast<size_t>(k)];
  }

  entering = -1;
  dj = 0.0;
  double best_score = kReducedCostTol;
  for (int j = 0; j < n_total_; ++j) {
    ColState st = state_[static_cast<size_t>(j)];
    if (st == ColState::Basic)
      continue;
    if (lb_[static_cast<size_t>(j)] == ub_[static_cast<size_t>(j)])
      continue; // fixed
    double d = cost[static_cast<size_t>(j)] - column_dot(j, y);
    bool eligible = false;
    if (st == ColState::AtLower && d < -kReducedCostTol)
      eligible = true;
    else if (st == ColState::AtUpper && d > kReducedCostTol)
      eligible = true;
    else if (st == ColState::Free && std::abs(d) > kReducedCostTol)
      eligible = true;
    if (!eligible)
      continue;
    if (bland) {
      entering = j;
      dj = d;
      return true;
    }
    if (std::abs(d) > best_score) {
      best_score = std::abs(d);
      entering = j;
      dj = d;
    }
  }
  return entering >= 0;
}

double SimplexKernel::current_objective(const std::vector<double> &cost) const {
  double z = 0.0;
  for (int j = 0; j < n_total_; ++j) {
    double c = cost[static_cast<size_t>(j)];
    if (c == 0.0)
      continue;
    z += c * (state_[static_cast<size_t>(j)] == ColState::Basic
                  ? xb_[static_cast<size_t>(basic_pos_[static_cast<size_t>(j)])]
                  : nonbasic_value(j));
  }
  return z;
}

// Returns 0 on optimal, 1 on unbounded; throws on iteration failure.
int SimplexKernel::iterate_phase(const std::vector<double> &cost,
                                 bool phase_one, double stop_below) {
  const long stall_limit = 5L * (n_total_ + m_);
  const long max_iterations = 50000L + 200L * (n_total_ + m_);
  long stalled = 0;
  bool bland = bland_always_;
  std::vector<double> w;

  while (true) {
    if (phase_one && current_objective(cost) < stop_below)
      return 0; // feasible enough; caller re-checks exactly
    int entering = -1;
    double dj = 0.0;
    if (meter_)
      meter_->add(static_cast<double>(m_) * m_ + total_nnz_);
    if (!price(entering, dj, cost, bland))
      return 0;

    // Direction: +1 moves the entering variable up from its lower bound,
    // -1 moves it down from its upper bound.
    double delta;
    if (state_[static_cast<size_t>(entering)] == ColState::AtUpper)
      delta = -1.0;
    else if (state_[static_cast<size_t>(entering)] == ColState::AtLower)
      delta = 1.0;
    else
      delta = dj < 0.0 ? 1.0 : -1.0; // free variable moves downhill

    ftran(entering, w);
    if (meter_)
      meter_->add(static_cast<double>(m_) *
                  static_cast<double>(cols_[static_cast<size_t>(entering)].size()));

    double range = ub_[static_cast<size_t>(entering)] - lb_[static_cast<size_t>(entering)];
    double best_t = std::isfinite(range) && state_[static_cast<size_t>(entering)] != ColState::Free
                        ? range
                        : kInf;
    int leave_pos = -1; // -1 means bound flip
    double leave_pivot = 0.0;
    bool leave_to_lower = false;
    for (int i = 0; i < m_; ++i) {
      double wi = w[static_cast<size_t>(i)];
      if (std::abs(wi) < kPivotTol)
        continue;
      int bj = basis_[static_cast<size_t>(i)];
      double rate = delta * wi; // xb_i decreases at this rate
      double t;
      bool to_lower;
      if (rate > 0.0) {
        double lo = lb_[static_cast<size_t>(bj)];
        if (!std::isfinite(lo))
          continue;
        t = (xb_[static_cast<size_t>(i)] - lo) / rate;
        to_lower = true;
      } else {
        double hi = ub_[static_cast<size_t>(bj)];
        if (!std::isfinite(hi))
          continue;
        t = (xb_[static_cast<size_t>(i)] - hi) / rate;
        to_lower = false;
      }
      if (t < 0.0)
        t = 0.0; // roundoff
      bool better;
      if (t < best_t - 1e-12) {
        better = true;
      } else if (t <= best_t + 1e-12 && leave_pos >= 0) {
        if (bland)
          better = bj < basis_[static_cast<size_t>(leave_pos)];
        else
          better = std::abs(wi) > std::abs(leave_pivot) + 1e-12;
      } else {
        better = t < best_t;
      }
      if (better) {
        best_t = t;
        leave_pos = i;
        leave_pivot = wi;
        leave_to_lower = to_lower;
      }
    }

    if (!std::isfinite(best_t))
      return 1; // unbounded ray

    double improvement = std::abs(dj) * best_t;
    if (improvement > 1e-12) {
      stalled = 0;
      bland = bland_always_;
    } else if (!bland && ++stalled > stall_limit) {
      bland = true;
    }

    // Apply the step.
    double t = best_t;
    if (t != 0.0)
      for (int i = 0; i < m_; ++i)
        xb_[static_cast<size_t>(i)] -= delta * t * w[static_cast<size_t>(i)];

    if (leave_pos < 0) {
      // Bound flip: the entering variable crosses to its other bound.
      state_[static_cast<size_t>(entering)] =
          state_[static_cast<size_t>(entering)] == ColState::AtLower
              ? ColState::AtUpper
              : ColState::AtLower;
    } else {
      int leaving = basis_[static_cast<size_t>(leave_pos)];
      double entering_value = nonbasic_value(entering) + delta * t;
      state_[static_cast<size_t>(leaving)] =
          leave_to_lower ? ColState::AtLower : ColState::AtUpper;
      basic_pos_[static_cast<size_t>(leaving)] = -1;
      basis_[static_cast<size_t>(leave_pos)] = entering;
      basic_pos_[static_cast<size_t>(entering)] = leave_pos;
      state_[static_cast<size_t>(entering)] = ColState::Basic;

      // Pivot the inverse: eliminate w from every other row.
      double pivot = w[static_cast<size_t>(leave_pos)];
      auto &pivot_row = binv_[static_cast<size_t>(leave_pos)];
      for (int k = 0; k < m_; ++k)
        pivot_row[static_cast<size_t>(k)] /= pivot;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_pos)
          continue;
        double factor = w[static_cast<size_t>(i)];
        if (factor == 0.0)
          continue;
        auto &row = binv_[static_cast<size_t>(i)];
        for (int k = 0; k < m_; ++k)
          row[static_cast<size_t>(k)] -= factor * pivot_row[static_cast<size_t>(k)];
      }
      if (meter_)
        meter_->add(2.0 * static_cast<double>(m_) * m_);
      xb_[static_cast<size_t>(leave_pos)] = entering_value;
      if (++pivots_since_refactor_ >= 500)
        refactorize();
    }

    if (++iterations_ > max_iterations)
      throw Error(ErrorCode::NumericalFailure,
                  "simplex exceeded its iteration budget");
  }
}

bool SimplexKernel::drive_out_artificials() {
  std::vector<double> w;
  for (int i = 0; i < m_; ++i) {
    int bj = basis_[static_cast<size_t>(i)];
    if (bj < n_struct_ + m_)
      continue; // not artificial
    // Degenerate pivot: bring in any non-artificial column with a usable
    // pivot element in this row.
    int replacement = -1;
    for (int j = 0; j < n_struct_ + m_ && replacement < 0; ++j) {
      if (state_[static_cast<size_t>(j)] == ColState::Basic)
        continue;
      double piv = 0.0;
      for (const auto &[row, coeff] : cols_[static_cast<size_t>(j)])
        piv += coeff * binv_[static_cast<size_t>(i)][static_cast<size_t>(row)];
      if (std::abs(piv) > 1e-7)
        replacement = j;
    }
    if (replacement < 0)
      continue; // redundant row; artificial stays basic, pinned at zero
    ftran(replacement, w);
    double pivot = w[static_cast<size_t>(i)];
    if (std::abs(pivot) < kPivotTol)
      continue;
    state_[static_cast<size_t>(bj)] = ColState::AtLower;
    basic_pos_[static_cast<size_t>(bj)] = -1;
    double entering_value = nonbasic_value(replacement);
    basis_[static_cast<size_t>(i)] = replacement;
    basic_pos_[static_cast<size_t>(replacement)] = i;
    state_[static_cast<size_t>(replacement)] = ColState::Basic;
    auto &pivot_row = binv_[static_cast<size_t>(i)];
    for (int k = 0; k < m_; ++k)
      pivot_row[static_cast<size_t>(k)] /= pivot;
    for (int r = 0; r < m_; ++r) {
      if (r == i)
        continue;
      double factor = w[static_cast<size_t>(r)];
      if (factor == 0.0)
        continue;
      auto &row = binv_[static_cast<size_t>(r)];
      for (int k = 0; k < m_; ++k)
        row[static_cast<size_t>(k)] -= factor * pivot_row[static_cast<size_t>(k)];
    }
    xb_[static_cast<size_t>(i)] = entering_value;
  }
  recompute_basic_values();
  return true;
}

bool SimplexKernel::verify_primal(const std::vector<double> &x) const {
  for (int i = 0; i < m_; ++i) {
    const LinearConstraint &c = model_.constraint(i);
    double act = 0.0;
    double scale = 1.0 + std::abs(c.rhs);
    for (const auto &[var, coeff] : c.row) {
      double term = coeff * x[static_cast<size_t>(var)];
      act += term;
      scale += std::abs(term);
    }
    double tol = 1e-7 * scale;
    switch (c.sense) {
    case Sense::LessEqual:
      if (act > c.rhs + tol)
        return false;
      break;
    case Sense::GreaterEqual:
      if (act < c.rhs - tol)
        return false;
      break;
    case Sense::Equal:
      if (std::abs(act - c.rhs) > tol)
        return false;
      break;
    }
  }
  return true;
}

LpSolution SimplexKernel::run() {
  LpSolution sol;
  if (m_ == 0) {
    // Pure bound problem.
    sol.values.assign(static_cast<size_t>(n_struct_), 0.0);
    std::vector<double> c(static_cast<size_t>(n_struct_), 0.0);
    for (const auto &[var, coeff] : model_.objective())
      c[static_cast<size_t>(var)] += coeff;
    double z = 0.0;
    for (int j = 0; j < n_struct_; ++j) {
      double lo = lb_[static_cast<size_t>(j)], hi = ub_[static_cast<size_t>(j)];
      double cj = c[static_cast<size_t>(j)];
      double v;
      if (cj > 0.0)
        v = lo;
      else if (cj < 0.0)
        v = hi;
      else
        v = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
      if (!std::isfinite(v)) {
        sol.status = LpSolution::Status::Unbounded;
        return sol;
      }
      sol.values[static_cast<size_t>(j)] = v;
      z += cj * v;
    }
    sol.status = LpSolution::Status::Optimal;
    sol.objective = z;
    return sol;
  }

  start_basis();

  // Phase 1: minimize the artificial mass.
  std::vector<double> cost1(static_cast<size_t>(n_total_), 0.0);
  for (int i = 0; i < m_; ++i)
    cost1[static_cast<size_t>(n_struct_ + m_ + i)] = 1.0;
  int status = iterate_phase(cost1, true, 0.5 * kArtificialTol);
  if (status == 1)
    throw Error(ErrorCode::NumericalFailure, "phase-1 reported an unbounded ray");
  refactorize();
  double infeasibility = current_objective(cost1);
  if (infeasibility > kArtificialTol) {
    sol.status = LpSolution::Status::Infeasible;
    sol.iterations = iterations_;
    return sol;
  }

  // Pin artificials to zero and remove them from the active basis when a
  // substitute column exists.
  drive_out_artificials();
  for (int i = 0; i < m_; ++i) {
    int art = n_struct_ + m_ + i;
    ub_[static_cast<size_t>(art)] = 0.0;
  }

  // Phase 2: original objective.
  std::vector<double> cost2(static_cast<size_t>(n_total_), 0.0);
  for (const auto &[var, coeff] : model_.objective())
    cost2[static_cast<size_t>(var)] += coeff;
  status = iterate_phase(cost2, false, -kInf);
  if (status == 1) {
    sol.status = LpSolution::Status::Unbounded;
    sol.iterations = iterations_;
    return sol;
  }

  refactorize();
  sol.values.assign(static_cast<size_t>(n_struct_), 0.0);
  for (int j = 0; j < n_struct_; ++j) {
    double v = state_[static_cast<size_t>(j)] == ColState::Basic
                   ? xb_[static_cast<size_t>(basic_pos_[static_cast<size_t>(j)])]
                   : nonbasic_value(j);
    // Snap tiny bound violations from roundoff.
    if (std::isfinite(lb_[static_cast<size_t>(j)]))
      v = std::max(v, lb_[static_cast<size_t>(j)] - 1e-10);
    if (std::isfinite(ub_[static_cast<size_t>(j)]))
      v = std::min(v, ub_[static_cast<size_t>(j)] + 1e-10);
    sol.values[static_cast<size_t>(j)] = v;
  }
  double z = 0.0;
  for (const auto &[var, coeff] : model_.objective())
    z += coeff * sol.values[static_cast<size_t>(var)];
  sol.objective = z;
  sol.status = LpSolution::Status::Optimal;
  sol.iterations = iterations_;
  if (!verify_primal(sol.values))
    throw Error(ErrorCode::NumericalFailure, "optimal basis failed the residual check");
  return sol;
}

} // namespace

LpSolution solve_lp(const MilpModel &model, WorkMeter *meter) {
  if (model.has_integer_variables())
    throw Error(ErrorCode::NotRelaxed,
                "solve_lp requires a relaxed model; call relax() first");
  for (int i = 0; i < model.num_variables(); ++i) {
    const Variable &v = model.variable(i);
    if (v.lower > v.upper)
      return LpSolution{LpSolution::Status::Infeasible, {}, 0.0, 0};
  }
  try {
    SimplexKernel kernel(model, meter, false);
    return kernel.run();
  } catch (const Error &e) {
    if (e.code() != ErrorCode::NumericalFailure)
      throw;
    // One retry on the cautious pivot rule before giving up.
    SimplexKernel kernel(model, meter, true);
    return kernel.run();
  }
}

// ---------------------------------------------------------------------------
// LP text format
// ---------------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_row(std::ostream &os, const SparseRow &row) {
  for (const auto &[var, coeff] : row)
    os << (coeff < 0.0 ? " - " : " + ") << fmt_double(std::abs(coeff)) << " x"
       << var;
}

} // namespace

void export_lp(const MilpModel &model, const std::string &path) {
  std::ofstream os(path);
  if (!os)
    throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  os << "Minimize\n obj:";
  write_row(os, model.objective());
  os << "\nSubject To\n";
  for (int i = 0; i < model.num_constraints(); ++i) {
    const LinearConstraint &c = model.constraint(i);
    os << " c" << i << ":";
    write_row(os, c.row);
    switch (c.sense) {
    case Sense::LessEqual:
      os << " <= ";
      break;
    case Sense::GreaterEqual:
      os << " >= ";
      break;
    case Sense::Equal:
      os << " = ";
      break;
    }
    os << fmt_double(c.rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable &v = model.variable(j);
    os << " " << (std::isfinite(v.lower) ? fmt_double(v.lower) : "-inf")
       << " <= x" << j << " <= "
       << (std::isfinite(v.upper) ? fmt_double(v.upper) : "+inf") << "\n";
  }
  os << "Binaries\n";
  for (int j = 0; j < model.num_variables(); ++j)
    if (model.variable(j).is_integer)
      os << " x" << j << "\n";
  os << "End\n";
}

namespace {

double parse_bound_token(const std::string &tok) {
  if (tok == "-inf")
    return -kInf;
  if (tok == "+inf" || tok == "inf")
    return kInf;
  return std::stod(tok);
}

int parse_var_token(const std::string &tok) {
  if (tok.size() < 2 || tok[0] != 'x')
    throw Error(ErrorCode::ParseError, "expected variable token, got " + tok);
  return std::stoi(tok.substr(1));
}

SparseRow parse_terms(std::istringstream &in, std::string &stop_token) {
  SparseRow row;
  std::string tok;
  double sign = 1.0;
  while (in >> tok) {
    if (tok == "+") {
      sign = 1.0;
    } else if (tok == "-") {
      sign = -1.0;
    } else if (tok == "<=" || tok == ">=" || tok == "=") {
      stop_token = tok;
      return row;
    } else {
      double coeff = sign * std::stod(tok);
      std::string var_tok;
      if (!(in >> var_tok))
        throw Error(ErrorCode::ParseError, "dangling coefficient in LP row");
      row.push_back({parse_var_token(var_tok), coeff});
      sign = 1.0;
    }
  }
  stop_token.clear();
  return row;
}

} // namespace

MilpModel import_lp(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw Error(ErrorCode::ParseError, "cannot open " + path);

  enum Section { None, Objective, Constraints, Bnds, Bins, Done } section = None;
  SparseRow objective;
  std::vector<std::tuple<SparseRow, Sense, double>> rows;
  std::vector<std::pair<double, double>> bounds;
  std::vector<int> binaries;

  std::string line;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    if (line == "Minimize") {
      section = Objective;
      continue;
    }
    if (line == "Subject To") {
      section = Constraints;
      continue;
    }
    if (line == "Bounds") {
      section = Bnds;
      continue;
    }
    if (line == "Binaries") {
      section = Bins;
      continue;
    }
    if (line == "End") {
      section = Done;
      break;
    }
    std::istringstream in(line);
    switch (section) {
    case Objective: {
      std::string label;
      in >> label; // "obj:"
      std::string stop;
      objective = parse_terms(in, stop);
      break;
    }
    case Constraints: {
      std::string label;
      in >> label; // "c<i>:"
      std::string stop;
      SparseRow row = parse_terms(in, stop);
      if (stop.empty())
        throw Error(ErrorCode::ParseError, "constraint without sense: " + line);
      Sense sense = stop == "<=" ? Sense::LessEqual
                                 : (stop == ">=" ? Sense::GreaterEqual : Sense::Equal);
      std::string rhs_tok;
      if (!(in >> rhs_tok))
        throw Error(ErrorCode::ParseError, "constraint without rhs: " + line);
      rows.push_back({std::move(row), sense, std::stod(rhs_tok)});
      break;
    }
    case Bnds: {
      std::string lo_tok, le1, var_tok, le2, hi_tok;
      if (!(in >> lo_tok >> le1 >> var_tok >> le2 >> hi_tok) || le1 != "<=" ||
          le2 != "<=")
        throw Error(ErrorCode::ParseError, "malformed bounds line: " + line);
      int id = parse_var_token(var_tok);
      if (id != static_cast<int>(bounds.size()))
        throw Error(ErrorCode::ParseError, "bounds lines out of order: " + line);
      bounds.push_back({parse_bound_token(lo_tok), parse_bound_token(hi_tok)});
      break;
    }
    case Bins: {
      std::string var_tok;
      while (in >> var_tok)
        binaries.push_back(parse_var_token(var_tok));
      break;
    }
    case None:
    case Done:
      throw Error(ErrorCode::ParseError, "unexpected content: " + line);
    }
  }
  if (section != Done)
    throw Error(ErrorCode::ParseError, "missing End marker");

  MilpModel model;
  for (size_t j = 0; j < bounds.size(); ++j)
    model.add_variable("x" + std::to_string(j), bounds[j].first,
                       bounds[j].second, false);
  for (auto &[row, sense, rhs] : rows)
    model.add_constraint(std::move(row), sense, rhs);
  model.set_objective(std::move(objective));
  for (int id : binaries) {
    if (id < 0 || id >= model.num_variables())
      throw Error(ErrorCode::ParseError, "binary declaration for unknown variable");
    model.mark_integer(id);
  }
  return model;
}

} // namespace gip
