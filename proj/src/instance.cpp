#include "gip/instance.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "gip/graph_algo.hpp"

namespace gip {

GipInstance::GipInstance(int num_vertices, std::vector<Edge> edges,
                         VertexId root,
                         std::vector<std::vector<VertexId>> groups)
    : num_vertices_(num_vertices), edges_(std::move(edges)), root_(root),
      groups_(std::move(groups)) {
  if (num_vertices_ <= 0)
    throw Error(ErrorCode::InvalidInstance, "instance needs at least one vertex");
  if (root_ < 0 || root_ >= num_vertices_)
    throw Error(ErrorCode::InvalidInstance, "root is not a valid vertex id");

  std::set<std::pair<VertexId, VertexId>> seen;
  for (const Edge &e : edges_) {
    if (e.tail < 0 || e.tail >= num_vertices_ || e.head < 0 ||
        e.head >= num_vertices_)
      throw Error(ErrorCode::InvalidInstance, "edge endpoint out of range");
    if (e.tail == e.head)
      throw Error(ErrorCode::InvalidInstance, "self loops are not allowed");
    if (!seen.insert({e.tail, e.head}).second)
      throw Error(ErrorCode::InvalidInstance, "duplicate directed edge");
    if (e.cost < 0.0)
      throw Error(ErrorCode::InvalidInstance, "negative edge cost");
    if (e.cost <= 0.0)
      strictly_positive_costs_ = false;
  }

  out_edges_.assign(static_cast<size_t>(num_vertices_), {});
  in_edges_.assign(static_cast<size_t>(num_vertices_), {});
  for (EdgeId e = 0; e < num_edges(); ++e) {
    out_edges_[static_cast<size_t>(edges_[static_cast<size_t>(e)].tail)].push_back(e);
    in_edges_[static_cast<size_t>(edges_[static_cast<size_t>(e)].head)].push_back(e);
  }

  group_member_.assign(groups_.size(),
                       std::vector<char>(static_cast<size_t>(num_vertices_), 0));
  for (size_t i = 0; i < groups_.size(); ++i) {
    for (VertexId v : groups_[i]) {
      if (v < 0 || v >= num_vertices_)
        throw Error(ErrorCode::InvalidInstance, "group member out of range",
                    static_cast<int>(i));
      group_member_[i][static_cast<size_t>(v)] = 1;
    }
  }
}

EdgeId GipInstance::find_edge(VertexId tail, VertexId head) const {
  if (tail < 0 || tail >= num_vertices_)
    return -1;
  for (EdgeId e : out_edges_[static_cast<size_t>(tail)])
    if (edges_[static_cast<size_t>(e)].head == head)
      return e;
  return -1;
}

std::vector<int> GipInstance::empty_groups() const {
  std::vector<int> result;
  for (int i = 0; i < num_groups(); ++i)
    if (groups_[static_cast<size_t>(i)].empty())
      result.push_back(i);
  return result;
}

bool GipInstance::group_contains(int i, VertexId v) const {
  return group_member_[static_cast<size_t>(i)][static_cast<size_t>(v)] != 0;
}

std::string to_string(VerifyResult::Kind kind) {
  switch (kind) {
  case VerifyResult::Kind::Feasible:
    return "Feasible";
  case VerifyResult::Kind::NotClosed:
    return "NotClosed";
  case VerifyResult::Kind::BrokenChain:
    return "BrokenChain";
  case VerifyResult::Kind::UnknownEdge:
    return "UnknownEdge";
  case VerifyResult::Kind::RepeatedEdge:
    return "RepeatedEdge";
  case VerifyResult::Kind::GroupUncovered:
    return "GroupUncovered";
  }
  return "?";
}

std::vector<std::vector<VertexId>> invert_coverage(const CoverageMap &coverage) {
  std::vector<std::vector<VertexId>> groups(
      static_cast<size_t>(coverage.poi_count));
  for (VertexId v = 0; v < static_cast<VertexId>(coverage.by_vertex.size());
       ++v) {
    for (int p : coverage.by_vertex[static_cast<size_t>(v)]) {
      if (p < 0 || p >= coverage.poi_count)
        throw Error(ErrorCode::InvalidInstance, "POI id out of range", p);
      groups[static_cast<size_t>(p)].push_back(v);
    }
  }
  for (auto &g : groups) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
  }
  return groups;
}

VerifyResult verify_walk_structure(const GipInstance &inst, const Tour &tour,
                                   std::vector<char> *groups_covered) {
  VerifyResult res;
  if (groups_covered)
    groups_covered->assign(static_cast<size_t>(inst.num_groups()), 0);
  if (tour.edges.empty()) {
    res.kind = VerifyResult::Kind::NotClosed;
    return res;
  }
  std::vector<char> used(static_cast<size_t>(inst.num_edges()), 0);
  VertexId at = inst.root();
  double cost = 0.0;
  auto mark_visit = [&](VertexId v) {
    if (!groups_covered)
      return;
    for (int i = 0; i < inst.num_groups(); ++i)
      if (inst.group_contains(i, v))
        (*groups_covered)[static_cast<size_t>(i)] = 1;
  };
  mark_visit(at);
  for (EdgeId e : tour.edges) {
    if (e < 0 || e >= inst.num_edges()) {
      res.kind = VerifyResult::Kind::UnknownEdge;
      return res;
    }
    if (used[static_cast<size_t>(e)]) {
      res.kind = VerifyResult::Kind::RepeatedEdge;
      return res;
    }
    used[static_cast<size_t>(e)] = 1;
    const Edge &edge = inst.edge(e);
    if (edge.tail != at) {
      res.kind = VerifyResult::Kind::BrokenChain;
      return res;
    }
    at = edge.head;
    cost += edge.cost;
    mark_visit(at);
  }
  if (at != inst.root()) {
    res.kind = VerifyResult::Kind::NotClosed;
    return res;
  }
  res.kind = VerifyResult::Kind::Feasible;
  res.cost = cost;
  return res;
}

VerifyResult verify_tour(const GipInstance &inst, const Tour &tour) {
  std::vector<char> covered;
  VerifyResult res = verify_walk_structure(inst, tour, &covered);
  if (!res.feasible())
    return res;
  for (int i = 0; i < inst.num_groups(); ++i) {
    if (!covered[static_cast<size_t>(i)]) {
      res.kind = VerifyResult::Kind::GroupUncovered;
      res.group = i;
      res.cost = 0.0;
      return res;
    }
  }
  return res;
}

namespace {

// Selection feasibility for the exhaustive search: balance, root departure,
// coverage threshold, and a single root SCC spanning all touched vertices.
bool selection_feasible(const GipInstance &inst,
                        const std::vector<char> &selected,
                        int min_groups_covered) {
  std::vector<int> in_deg(static_cast<size_t>(inst.num_vertices()), 0);
  std::vector<int> out_deg(static_cast<size_t>(inst.num_vertices()), 0);
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (!selected[static_cast<size_t>(e)])
      continue;
    out_deg[static_cast<size_t>(inst.edge(e).tail)]++;
    in_deg[static_cast<size_t>(inst.edge(e).head)]++;
  }
  for (VertexId v = 0; v < inst.num_vertices(); ++v)
    if (in_deg[static_cast<size_t>(v)] != out_deg[static_cast<size_t>(v)])
      return false;
  if (out_deg[static_cast<size_t>(inst.root())] < 1)
    return false;

  int covered = 0;
  for (int i = 0; i < inst.num_groups(); ++i) {
    bool hit = false;
    for (VertexId v : inst.group(i)) {
      if (in_deg[static_cast<size_t>(v)] > 0) {
        hit = true;
        break;
      }
    }
    if (hit)
      ++covered;
  }
  int required = min_groups_covered < 0 ? inst.num_groups() : min_groups_covered;
  if (covered < required)
    return false;

  std::vector<char> scc = scc_of_vertex(inst, selected, inst.root());
  for (VertexId v = 0; v < inst.num_vertices(); ++v)
    if (in_deg[static_cast<size_t>(v)] > 0 && !scc[static_cast<size_t>(v)])
      return false;
  return true;
}

} // namespace

BruteForceResult brute_force_optimum(const GipInstance &inst, int max_edges,
                                     int min_groups_covered) {
  const int m = inst.num_edges();
  if (m > max_edges)
    throw Error(ErrorCode::TooLarge,
                "instance has " + std::to_string(m) +
                    " edges; exhaustive search is capped at " +
                    std::to_string(max_edges));

  BruteForceResult best;
  std::vector<char> selected(static_cast<size_t>(m), 0);
  const unsigned long long limit = 1ull << m;
  for (unsigned long long mask = 1; mask < limit; ++mask) {
    double cost = 0.0;
    for (int e = 0; e < m; ++e) {
      selected[static_cast<size_t>(e)] = (mask >> e) & 1ull;
      if (selected[static_cast<size_t>(e)])
        cost += inst.edge(e).cost;
    }
    if (best.feasible && cost >= best.cost)
      continue;
    if (!selection_feasible(inst, selected, min_groups_covered))
      continue;
    best.feasible = true;
    best.cost = cost;
    best.tour = eulerian_circuit(inst, selected, inst.root());
  }
  return best;
}

} // namespace gip
