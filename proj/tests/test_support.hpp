/**
 * @file test_support.hpp
 * @brief Shared fixtures and independent oracles for the test suites: tiny
 *        instances, a closed-walk enumerator, and seeded random generators.
 */

#ifndef GIP_TEST_SUPPORT_HPP
#define GIP_TEST_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "gip/instance.hpp"

namespace gip::test {

// Triangle: root 0, all six unit arcs, groups {1} and {2}.
inline GipInstance make_t3() {
  std::vector<Edge> edges{{0, 1, 1.0}, {1, 0, 1.0}, {0, 2, 1.0},
                          {2, 0, 1.0}, {1, 2, 1.0}, {2, 1, 1.0}};
  return GipInstance(3, std::move(edges), 0, {{1}, {2}});
}

// Two vertices joined both ways at unit cost, one group on vertex 1.
inline GipInstance make_p2() {
  std::vector<Edge> edges{{0, 1, 1.0}, {1, 0, 1.0}};
  return GipInstance(2, std::move(edges), 0, {{1}});
}

// Deterministic, library-independent PRNG for test data.
struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed ^ 0x6a09e667f3bcc909ull) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

/// Random sparse digraph instance: 4..8 vertices, up to 20 distinct arcs,
/// 1..3 groups, costs in (0, 10]. May be infeasible; callers decide.
inline GipInstance random_instance(std::uint64_t seed) {
  TestRng rng(seed);
  int n = 4 + rng.below(5);
  int target_edges = 6 + rng.below(15); // 6..20
  std::set<std::pair<int, int>> picked;
  std::vector<Edge> edges;
  for (int tries = 0; tries < 200 && static_cast<int>(edges.size()) < target_edges;
       ++tries) {
    int tail = rng.below(n);
    int head = rng.below(n);
    if (tail == head)
      continue;
    if (!picked.insert({tail, head}).second)
      continue;
    edges.push_back({tail, head, rng.in(0.0, 10.0) + 1e-9});
  }
  int k = 1 + rng.below(3);
  std::vector<std::vector<VertexId>> groups;
  for (int i = 0; i < k; ++i) {
    std::set<VertexId> members;
    int size = 1 + rng.below(3);
    for (int j = 0; j < size; ++j)
      members.insert(rng.below(n));
    groups.emplace_back(members.begin(), members.end());
  }
  return GipInstance(n, std::move(edges), 0, std::move(groups));
}

/// Exhaustive closed-walk enumerator: cheapest closed walk from the root
/// with no repeated directed edge covering every group. Independent of
/// brute_force_optimum (walk search rather than selection search).
inline std::optional<double> cheapest_covering_walk(const GipInstance &inst) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> used(static_cast<size_t>(inst.num_edges()), 0);
  std::vector<char> covered(static_cast<size_t>(inst.num_groups()), 0);

  auto groups_done = [&]() {
    for (char c : covered)
      if (!c)
        return false;
    return true;
  };

  // Mark coverage contributed by a vertex; returns which groups flipped.
  auto visit = [&](VertexId v, std::vector<int> &flipped) {
    for (int i = 0; i < inst.num_groups(); ++i) {
      if (!covered[static_cast<size_t>(i)] && inst.group_contains(i, v)) {
        covered[static_cast<size_t>(i)] = 1;
        flipped.push_back(i);
      }
    }
  };

  std::vector<int> root_flips;
  visit(inst.root(), root_flips);

  std::function<void(VertexId, double)> dfs = [&](VertexId at, double cost) {
    if (cost >= best)
      return;
    if (at == inst.root() && cost > 0.0 && groups_done())
      best = std::min(best, cost);
    for (EdgeId e : inst.out_edges(at)) {
      if (used[static_cast<size_t>(e)])
        continue;
      used[static_cast<size_t>(e)] = 1;
      std::vector<int> flipped;
      visit(inst.edge(e).head, flipped);
      dfs(inst.edge(e).head, cost + inst.edge(e).cost);
      for (int i : flipped)
        covered[static_cast<size_t>(i)] = 0;
      used[static_cast<size_t>(e)] = 0;
    }
  };
  dfs(inst.root(), 0.0);

  if (best == std::numeric_limits<double>::infinity())
    return std::nullopt;
  return best;
}

/// All simple directed cycles, as edge-id lists (bounded search for tiny
/// graphs).
inline std::vector<std::vector<EdgeId>> simple_cycles(const GipInstance &inst,
                                                      size_t cap = 500) {
  std::vector<std::vector<EdgeId>> cycles;
  std::vector<char> on_path(static_cast<size_t>(inst.num_vertices()), 0);
  std::vector<EdgeId> path;

  std::function<void(VertexId, VertexId)> dfs = [&](VertexId start, VertexId at) {
    if (cycles.size() >= cap)
      return;
    for (EdgeId e : inst.out_edges(at)) {
      VertexId head = inst.edge(e).head;
      if (head == start) {
        path.push_back(e);
        cycles.push_back(path);
        path.pop_back();
      } else if (head > start && !on_path[static_cast<size_t>(head)]) {
        // Only cycles whose smallest vertex is `start`, to avoid duplicates.
        on_path[static_cast<size_t>(head)] = 1;
        path.push_back(e);
        dfs(start, head);
        path.pop_back();
        on_path[static_cast<size_t>(head)] = 0;
      }
    }
  };
  for (VertexId s = 0; s < inst.num_vertices(); ++s) {
    on_path.assign(static_cast<size_t>(inst.num_vertices()), 0);
    on_path[static_cast<size_t>(s)] = 1;
    dfs(s, s);
  }
  return cycles;
}

/// Random degree-balanced 0/1 selection: an edge-disjoint union of simple
/// cycles, matching what node relaxations can emit as integral candidates.
inline std::vector<double> random_balanced_selection(const GipInstance &inst,
                                                     std::uint64_t seed) {
  TestRng rng(seed);
  std::vector<std::vector<EdgeId>> cycles = simple_cycles(inst);
  std::vector<double> values(static_cast<size_t>(inst.num_edges()), 0.0);
  if (cycles.empty())
    return values;
  std::vector<char> used(static_cast<size_t>(inst.num_edges()), 0);
  // Seeded shuffle, then greedy edge-disjoint inclusion with a coin flip.
  for (size_t i = cycles.size(); i > 1; --i)
    std::swap(cycles[i - 1], cycles[static_cast<size_t>(rng.below(static_cast<int>(i)))]);
  for (const auto &cycle : cycles) {
    bool clash = false;
    for (EdgeId e : cycle)
      clash = clash || used[static_cast<size_t>(e)];
    if (clash || rng.unit() < 0.4)
      continue;
    for (EdgeId e : cycle) {
      used[static_cast<size_t>(e)] = 1;
      values[static_cast<size_t>(e)] = 1.0;
    }
  }
  return values;
}

} // namespace gip::test

#endif // GIP_TEST_SUPPORT_HPP
