/**
 * @file graph_algo.hpp
 * @brief Graph routines shared by the oracles, the search engine and the
 *        heuristic: SCCs, Eulerian circuits, shortest paths.
 */

#ifndef GIP_GRAPH_ALGO_HPP
#define GIP_GRAPH_ALGO_HPP

#include <limits>
#include <vector>

#include "gip/instance.hpp"

namespace gip {

constexpr double kInfCost = std::numeric_limits<double>::infinity();

/// Membership flags of the strongly connected component containing `start`
/// in the subgraph formed by edges with `edge_selected[e] != 0`.
std::vector<char> scc_of_vertex(const GipInstance &inst,
                                const std::vector<char> &edge_selected,
                                VertexId start);

/// Vertices reachable from `start` along selected edges.
std::vector<char> reachable_from(const GipInstance &inst,
                                 const std::vector<char> &edge_selected,
                                 VertexId start);

/**
 * @brief Eulerian circuit over the selected edge set, starting at `start`.
 *
 * Requires per-vertex in-degree = out-degree on the selection and all
 * selected edges weakly connected to `start`; returns the traversal as a
 * tour. Selection entries may be 0/1 only (edges are never doubled).
 */
Tour eulerian_circuit(const GipInstance &inst,
                      const std::vector<char> &edge_selected, VertexId start);

/// Edges of the strongly connected component of the root, dropped to a
/// selection mask; used to peel disconnected components off incumbents.
std::vector<char> root_component_edges(const GipInstance &inst,
                                       const std::vector<char> &edge_selected,
                                       VertexId root);

struct ShortestPathTree {
  std::vector<double> dist;      // per-vertex distance from the source set
  std::vector<EdgeId> pred_edge; // incoming edge on a shortest path, -1 at sources
};

/**
 * @brief Dijkstra from one or more sources under per-edge costs.
 *
 * Costs must be nonnegative. `skip_edge[e] != 0` removes an edge from the
 * search (pass empty to use all edges). Ties are resolved by vertex id so
 * the tree is deterministic.
 */
ShortestPathTree dijkstra(const GipInstance &inst,
                          const std::vector<double> &edge_costs,
                          const std::vector<VertexId> &sources,
                          const std::vector<char> &skip_edge = {});

/// Path of edge ids from a source to `target` in a shortest-path tree;
/// empty if target is a source, throws if target is unreachable.
std::vector<EdgeId> extract_path(const ShortestPathTree &tree,
                                 const GipInstance &inst, VertexId target);

/// All-pairs shortest path distances and predecessor edges (one Dijkstra
/// per source vertex); dist[u][v] and pred[u][v].
struct AllPairs {
  std::vector<std::vector<double>> dist;
  std::vector<std::vector<EdgeId>> pred_edge;
};

AllPairs all_pairs_shortest_paths(const GipInstance &inst,
                                  const std::vector<double> &edge_costs);

} // namespace gip

#endif // GIP_GRAPH_ALGO_HPP
