/**
 * @file instance.hpp
 * @brief Inspection-planning instance: directed weighted graph, root vertex,
 *        coverage groups, tours and their verification.
 */

#ifndef GIP_INSTANCE_HPP
#define GIP_INSTANCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "gip/errors.hpp"

namespace gip {

using VertexId = int;
using EdgeId = int;

struct Edge {
  VertexId tail = -1;
  VertexId head = -1;
  double cost = 0.0;
};

/// Per-vertex visibility sets: which POI ids are inspected from each vertex.
struct CoverageMap {
  int poi_count = 0;
  std::vector<std::vector<int>> by_vertex; // sorted POI ids per vertex
};

/**
 * @brief Immutable problem instance.
 *
 * Construction validates the graph: vertex ids in range, no self loops, no
 * duplicate directed edge, costs nonnegative, group members valid. Empty
 * groups are permitted (they make the instance infeasible, which downstream
 * code reports rather than forbids).
 */
class GipInstance {
public:
  GipInstance(int num_vertices, std::vector<Edge> edges, VertexId root,
              std::vector<std::vector<VertexId>> groups);

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_groups() const { return static_cast<int>(groups_.size()); }
  VertexId root() const { return root_; }
  const std::vector<Edge> &edges() const { return edges_; }
  const Edge &edge(EdgeId e) const { return edges_[static_cast<size_t>(e)]; }
  const std::vector<std::vector<VertexId>> &groups() const { return groups_; }
  const std::vector<VertexId> &group(int i) const {
    return groups_[static_cast<size_t>(i)];
  }

  /// Edge ids leaving / entering a vertex.
  const std::vector<EdgeId> &out_edges(VertexId v) const {
    return out_edges_[static_cast<size_t>(v)];
  }
  const std::vector<EdgeId> &in_edges(VertexId v) const {
    return in_edges_[static_cast<size_t>(v)];
  }

  /// Edge id of (tail, head), or -1 if absent.
  EdgeId find_edge(VertexId tail, VertexId head) const;

  /// True iff every edge cost is strictly positive (Lemma-2 precondition).
  bool strictly_positive_costs() const { return strictly_positive_costs_; }

  /// Groups with no member vertex; nonempty result means infeasible.
  std::vector<int> empty_groups() const;

  /// True iff v is a member of group i.
  bool group_contains(int i, VertexId v) const;

private:
  int num_vertices_;
  std::vector<Edge> edges_;
  VertexId root_;
  std::vector<std::vector<VertexId>> groups_;
  std::vector<std::vector<EdgeId>> out_edges_;
  std::vector<std::vector<EdgeId>> in_edges_;
  std::vector<std::vector<char>> group_member_; // [group][vertex]
  bool strictly_positive_costs_ = true;
};

/// Closed directed walk from the root, as a sequence of edge ids.
struct Tour {
  std::vector<EdgeId> edges;
};

struct VerifyResult {
  enum class Kind {
    Feasible,
    NotClosed,
    BrokenChain,
    UnknownEdge,
    RepeatedEdge,
    GroupUncovered,
  };
  Kind kind = Kind::Feasible;
  int group = -1;    // set for GroupUncovered
  double cost = 0.0; // set when Feasible
  bool feasible() const { return kind == Kind::Feasible; }
};

std::string to_string(VerifyResult::Kind kind);

/// Invert per-vertex coverage into one vertex set per POI id.
std::vector<std::vector<VertexId>> invert_coverage(const CoverageMap &coverage);

/**
 * @brief Check a tour against an instance.
 *
 * Feasible iff the edge sequence chains head-to-tail, starts and ends at the
 * root, repeats no directed edge, and visits at least one member of every
 * group. An empty edge sequence is NotClosed (a tour must leave the root).
 */
VerifyResult verify_tour(const GipInstance &inst, const Tour &tour);

/// Structural part of verify_tour only (chaining, closure, edge validity);
/// coverage is reported via covered-group flags instead of a verdict.
VerifyResult verify_walk_structure(const GipInstance &inst, const Tour &tour,
                                   std::vector<char> *groups_covered = nullptr);

struct BruteForceResult {
  bool feasible = false;
  double cost = 0.0;
  Tour tour;
};

/**
 * @brief Exhaustive optimum over all binary edge selections.
 *
 * Keeps selections with per-vertex degree balance, at least one edge leaving
 * the root, required group coverage, and a single strongly connected
 * component spanning all touched vertices including the root; reports the
 * cheapest one as an Eulerian tour. Enumeration is 2^|E|.
 *
 * @param min_groups_covered require only this many covered groups
 *        (-1 = all groups; used by the partial-coverage variant).
 */
BruteForceResult brute_force_optimum(const GipInstance &inst,
                                     int max_edges = 22,
                                     int min_groups_covered = -1);

} // namespace gip

#endif // GIP_INSTANCE_HPP
