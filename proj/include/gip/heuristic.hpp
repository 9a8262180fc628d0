/**
 * @file heuristic.hpp
 * @brief Covering-tree primal heuristic: LP-discounted costs, greedy
 *        group-covering tree, tree-to-tour conversion via matching and an
 *        Eulerian traversal.
 */

#ifndef GIP_HEURISTIC_HPP
#define GIP_HEURISTIC_HPP

#include <vector>

#include "gip/instance.hpp"
#include "gip/lp.hpp"

namespace gip {

enum class MatchMode { Greedy, Exact };

/// All-pairs shortest paths are replaced by frontier searches on graphs
/// above this vertex count (Auto mode).
enum class TreeMode { Auto, FullMatrix, Frontier };

constexpr int kFullMatrixVertexLimit = 4000;
constexpr int kExactMatchingLimit = 12;

/// Edge costs scaled down by the fractional selection values; without LP
/// values the original costs are returned unchanged.
std::vector<double> discount_costs(const GipInstance &inst,
                                   const std::vector<double> *lp_values);

/// Group-covering tree as an edge multiset rooted at the instance root.
struct CoveringTree {
  std::vector<int> edge_count; // multiplicity per edge id
  std::vector<char> in_tree;   // vertex membership
  double cost = 0.0;           // multiset cost under the discounted metric
};

CoveringTree build_covering_tree(const GipInstance &inst,
                                 const std::vector<double> &discounted,
                                 TreeMode mode = TreeMode::Auto,
                                 WorkMeter *meter = nullptr);

struct HeuristicResult {
  Tour tour;
  double cost = 0.0;      // under the original edge costs
  double tree_cost = 0.0; // covering-tree multiset cost
  int odd_vertex_count = 0;
};

/**
 * @brief Convert a covering tree into a feasible tour.
 *
 * Pairs the odd-degree tree vertices (brute-force optimal pairing in Exact
 * mode, nearest-pair otherwise), walks an Eulerian circuit over tree steps
 * plus matching steps, and realizes every step as a directed shortest path
 * that avoids already-used arcs. A depth-first tree-doubling tour is built
 * alongside and the cheapest realizable candidate wins. Repeated visits are
 * shortcut where a direct unused edge keeps the walk cheaper.
 */
Tour tree_to_tour(const GipInstance &inst, const CoveringTree &tree,
                  MatchMode mode, const std::vector<double> &discounted,
                  int *odd_count_out = nullptr, WorkMeter *meter = nullptr);

/// Full three-phase pipeline; the returned tour always verifies.
HeuristicResult run_heuristic(const GipInstance &inst,
                              const std::vector<double> *lp_values,
                              MatchMode mode, TreeMode tree_mode = TreeMode::Auto,
                              WorkMeter *meter = nullptr);

} // namespace gip

#endif // GIP_HEURISTIC_HPP
