/**
 * @file formulation.hpp
 * @brief MILP builders: baseline coverage model plus the three
 *        subtour-elimination families and the partial-coverage variant.
 */

#ifndef GIP_FORMULATION_HPP
#define GIP_FORMULATION_HPP

#include <optional>
#include <vector>

#include "gip/instance.hpp"
#include "gip/lp.hpp"

namespace gip {

enum class Flavor { Baseline, Scf, Mcf, GroupCutset };

/**
 * @brief A built model together with the edge-variable bookkeeping.
 *
 * `edge_var` maps every edge id onto its binary selection variable.
 * `coverage_row` maps every group onto its coverage constraint, and
 * `group_select_var` holds the per-group selection binaries when the
 * partial-coverage variant is attached.
 */
struct FormulationHandle {
  const GipInstance *instance = nullptr;
  MilpModel model;
  std::vector<int> edge_var;     // edge id -> variable id
  std::vector<int> coverage_row; // group id -> constraint id
  Flavor flavor = Flavor::Baseline;
  std::optional<int> partial_q;        // set by add_partial_coverage
  std::vector<int> group_select_var;   // group id -> z variable id
};

/// Baseline model: selection binaries, objective, root departure, group
/// coverage, per-vertex degree balance. Throws EmptyGroup on an empty group.
FormulationHandle build_baseline(const GipInstance &inst);

/// Single-commodity flow subtour elimination; capacity constant is twice the
/// vertex count minus two.
FormulationHandle add_scf(FormulationHandle handle);

/// Multi-commodity flow subtour elimination; refuses models whose flow
/// variable count would exceed `size_guard`.
FormulationHandle add_mcf(FormulationHandle handle, long size_guard = 200000);

/// Tag the handle for lazy group-cutset solving; adds no static rows.
FormulationHandle add_group_cutset(FormulationHandle handle);

/// One group-cutset inequality for a root-side vertex set R: at least one
/// selected edge must leave R. R must contain the root and exclude at least
/// one whole group.
struct CutsetRow {
  std::vector<EdgeId> leaving_edges; // delta+(R)
  SparseRow row;                     // over edge variables, sense >=, rhs 1
};

CutsetRow group_cutset_constraint(const GipInstance &inst,
                                  const std::vector<char> &in_r,
                                  const std::vector<int> &edge_var);

/// Relax full coverage to "at least q groups": per-group selection binaries
/// replace the coverage right-hand sides.
FormulationHandle add_partial_coverage(FormulationHandle handle, int q);

} // namespace gip

#endif // GIP_FORMULATION_HPP
