#include "gip/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "gip/graph_algo.hpp"

namespace gip {

std::vector<double> discount_costs(const GipInstance &inst,
                                   const std::vector<double> *lp_values) {
  std::vector<double> costs(static_cast<size_t>(inst.num_edges()));
  for (EdgeId e = 0; e < inst.num_edges(); ++e)
    costs[static_cast<size_t>(e)] = inst.edge(e).cost;
  if (!lp_values)
    return costs;
  if (static_cast<int>(lp_values->size()) != inst.num_edges())
    throw Error(ErrorCode::OutOfRange, "LP values must cover every edge");
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    double x = (*lp_values)[static_cast<size_t>(e)];
    if (x < -kCutViolationTol || x > 1.0 + kCutViolationTol)
      throw Error(ErrorCode::OutOfRange, "LP value outside [0,1]");
    x = std::clamp(x, 0.0, 1.0);
    costs[static_cast<size_t>(e)] *= 1.0 - x;
  }
  return costs;
}

namespace {

double dijkstra_units(const GipInstance &inst) {
  double e = static_cast<double>(inst.num_edges());
  double v = static_cast<double>(inst.num_vertices());
  return (e + v) * std::log2(v + 2.0);
}

struct GroupCoverState {
  std::vector<char> group_covered;
  int uncovered = 0;

  explicit GroupCoverState(const GipInstance &inst)
      : group_covered(static_cast<size_t>(inst.num_groups()), 0),
        uncovered(inst.num_groups()) {}

  void visit(const GipInstance &inst, VertexId v) {
    for (int i = 0; i < inst.num_groups(); ++i) {
      if (!group_covered[static_cast<size_t>(i)] && inst.group_contains(i, v)) {
        group_covered[static_cast<size_t>(i)] = 1;
        --uncovered;
      }
    }
  }

  int first_uncovered() const {
    for (size_t i = 0; i < group_covered.size(); ++i)
      if (!group_covered[i])
        return static_cast<int>(i);
    return -1;
  }
};

void attach_path(const GipInstance &inst, const std::vector<EdgeId> &path,
                 const std::vector<double> &discounted, CoveringTree &tree,
                 GroupCoverState &cover) {
  for (EdgeId e : path) {
    tree.edge_count[static_cast<size_t>(e)] += 1;
    tree.cost += discounted[static_cast<size_t>(e)];
    VertexId head = inst.edge(e).head;
    if (!tree.in_tree[static_cast<size_t>(head)]) {
      tree.in_tree[static_cast<size_t>(head)] = 1;
      cover.visit(inst, head);
    }
  }
}

CoveringTree build_tree_full_matrix(const GipInstance &inst,
                                    const std::vector<double> &discounted,
                                    WorkMeter *meter) {
  AllPairs ap = all_pairs_shortest_paths(inst, discounted);
  if (meter)
    meter->add(inst.num_vertices() * dijkstra_units(inst));

  CoveringTree tree;
  tree.edge_count.assign(static_cast<size_t>(inst.num_edges()), 0);
  tree.in_tree.assign(static_cast<size_t>(inst.num_vertices()), 0);
  tree.in_tree[static_cast<size_t>(inst.root())] = 1;

  GroupCoverState cover(inst);
  cover.visit(inst, inst.root());

  while (cover.uncovered > 0) {
    // Closest member of an uncovered group; ties fall to the lowest
    // candidate id, then the lowest attachment id.
    double best_dist = kInfCost;
    VertexId best_candidate = -1;
    VertexId best_attach = -1;
    for (int i = 0; i < inst.num_groups(); ++i) {
      if (cover.group_covered[static_cast<size_t>(i)])
        continue;
      for (VertexId v : inst.group(i)) {
        if (tree.in_tree[static_cast<size_t>(v)])
          continue;
        for (VertexId u = 0; u < inst.num_vertices(); ++u) {
          if (!tree.in_tree[static_cast<size_t>(u)])
            continue;
          double d = ap.dist[static_cast<size_t>(u)][static_cast<size_t>(v)];
          if (d < best_dist ||
              (d == best_dist &&
               (v < best_candidate ||
                (v == best_candidate && u < best_attach)))) {
            best_dist = d;
            best_candidate = v;
            best_attach = u;
          }
        }
      }
    }
    if (meter)
      meter->add(static_cast<double>(inst.num_vertices()) *
                 static_cast<double>(inst.num_vertices()));
    if (best_candidate < 0 || best_dist == kInfCost)
      throw Error(ErrorCode::Unreachable,
                  "group " + std::to_string(cover.first_uncovered()) +
                      " cannot be reached from the root",
                  cover.first_uncovered());

    ShortestPathTree view;
    view.dist = ap.dist[static_cast<size_t>(best_attach)];
    view.pred_edge = ap.pred_edge[static_cast<size_t>(best_attach)];
    std::vector<EdgeId> path = extract_path(view, inst, best_candidate);
    attach_path(inst, path, discounted, tree, cover);
  }
  return tree;
}

CoveringTree build_tree_frontier(const GipInstance &inst,
                                 const std::vector<double> &discounted,
                                 WorkMeter *meter) {
  CoveringTree tree;
  tree.edge_count.assign(static_cast<size_t>(inst.num_edges()), 0);
  tree.in_tree.assign(static_cast<size_t>(inst.num_vertices()), 0);
  tree.in_tree[static_cast<size_t>(inst.root())] = 1;

  GroupCoverState cover(inst);
  cover.visit(inst, inst.root());

  while (cover.uncovered > 0) {
    std::vector<VertexId> sources;
    for (VertexId v = 0; v < inst.num_vertices(); ++v)
      if (tree.in_tree[static_cast<size_t>(v)])
        sources.push_back(v);
    ShortestPathTree sp = dijkstra(inst, discounted, sources);
    if (meter)
      meter->add(dijkstra_units(inst));

    double best_dist = kInfCost;
    VertexId best_candidate = -1;
    for (int i = 0; i < inst.num_groups(); ++i) {
      if (cover.group_covered[static_cast<size_t>(i)])
        continue;
      for (VertexId v : inst.group(i)) {
        if (tree.in_tree[static_cast<size_t>(v)])
          continue;
        double d = sp.dist[static_cast<size_t>(v)];
        if (d < best_dist || (d == best_dist && v < best_candidate)) {
          best_dist = d;
          best_candidate = v;
        }
      }
    }
    if (best_candidate < 0 || best_dist == kInfCost)
      throw Error(ErrorCode::Unreachable,
                  "group " + std::to_string(cover.first_uncovered()) +
                      " cannot be reached from the root",
                  cover.first_uncovered());
    std::vector<EdgeId> path = extract_path(sp, inst, best_candidate);
    attach_path(inst, path, discounted, tree, cover);
  }
  return tree;
}

} // namespace

CoveringTree build_covering_tree(const GipInstance &inst,
                                 const std::vector<double> &discounted,
                                 TreeMode mode, WorkMeter *meter) {
  for (int i = 0; i < inst.num_groups(); ++i)
    if (inst.group(i).empty())
      throw Error(ErrorCode::Unreachable,
                  "group " + std::to_string(i) + " is empty", i);
  if (mode == TreeMode::Auto)
    mode = inst.num_vertices() > kFullMatrixVertexLimit ? TreeMode::Frontier
                                                        : TreeMode::FullMatrix;
  return mode == TreeMode::FullMatrix
             ? build_tree_full_matrix(inst, discounted, meter)
             : build_tree_frontier(inst, discounted, meter);
}

// ---------------------------------------------------------------------------
// Phase 3: tree to tour
// ---------------------------------------------------------------------------

namespace {

// An undirected traversal step (a,b); realized later as a directed path.
struct Step {
  VertexId a;
  VertexId b;
};

// Undirected Hierholzer over the step multigraph, starting at root.
std::vector<std::pair<VertexId, VertexId>>
euler_steps(const std::vector<Step> &steps, VertexId root, int num_vertices) {
  std::vector<std::vector<std::pair<VertexId, int>>> adj(
      static_cast<size_t>(num_vertices));
  for (int s = 0; s < static_cast<int>(steps.size()); ++s) {
    adj[static_cast<size_t>(steps[static_cast<size_t>(s)].a)].push_back(
        {steps[static_cast<size_t>(s)].b, s});
    adj[static_cast<size_t>(steps[static_cast<size_t>(s)].b)].push_back(
        {steps[static_cast<size_t>(s)].a, s});
  }
  for (auto &lst : adj)
    std::sort(lst.begin(), lst.end());

  std::vector<char> used(steps.size(), 0);
  std::vector<size_t> cursor(static_cast<size_t>(num_vertices), 0);
  std::vector<VertexId> stack{root};
  std::vector<VertexId> order;
  while (!stack.empty()) {
    VertexId v = stack.back();
    auto &lst = adj[static_cast<size_t>(v)];
    size_t &cur = cursor[static_cast<size_t>(v)];
    while (cur < lst.size() && used[static_cast<size_t>(lst[cur].second)])
      ++cur;
    if (cur == lst.size()) {
      order.push_back(v);
      stack.pop_back();
    } else {
      used[static_cast<size_t>(lst[cur].second)] = 1;
      stack.push_back(lst[cur].first);
    }
  }
  std::reverse(order.begin(), order.end());
  if (order.size() != steps.size() + 1)
    throw Error(ErrorCode::NoDirectedRealization,
                "step multigraph is not a single Eulerian component");
  std::vector<std::pair<VertexId, VertexId>> seq;
  for (size_t i = 0; i + 1 < order.size(); ++i)
    seq.push_back({order[i], order[i + 1]});
  return seq;
}

// Realize a vertex-to-vertex hop as a directed path avoiding used arcs.
std::optional<std::vector<EdgeId>>
realize_hop(const GipInstance &inst, const std::vector<double> &discounted,
            VertexId from, VertexId to, std::vector<char> &used,
            WorkMeter *meter) {
  EdgeId direct = inst.find_edge(from, to);
  if (direct >= 0 && !used[static_cast<size_t>(direct)]) {
    used[static_cast<size_t>(direct)] = 1;
    return std::vector<EdgeId>{direct};
  }
  ShortestPathTree sp = dijkstra(inst, discounted, {from}, used);
  if (meter)
    meter->add(dijkstra_units(inst));
  if (sp.dist[static_cast<size_t>(to)] == kInfCost)
    return std::nullopt;
  std::vector<EdgeId> path = extract_path(sp, inst, to);
  for (EdgeId e : path)
    used[static_cast<size_t>(e)] = 1;
  return path;
}

std::optional<Tour> realize_circuit(
    const GipInstance &inst, const std::vector<double> &discounted,
    const std::vector<std::pair<VertexId, VertexId>> &hops, WorkMeter *meter) {
  std::vector<char> used(static_cast<size_t>(inst.num_edges()), 0);
  Tour tour;
  for (const auto &[from, to] : hops) {
    auto path = realize_hop(inst, discounted, from, to, used, meter);
    if (!path)
      return std::nullopt;
    tour.edges.insert(tour.edges.end(), path->begin(), path->end());
  }
  return tour;
}

double real_cost(const GipInstance &inst, const Tour &tour) {
  double c = 0.0;
  for (EdgeId e : tour.edges)
    c += inst.edge(e).cost;
  return c;
}

// Remove later visits of repeated vertices when a direct unused edge keeps
// the walk closed and no more expensive.
void shortcut_walk(const GipInstance &inst, Tour &tour) {
  bool changed = true;
  while (changed && !tour.edges.empty()) {
    changed = false;
    std::vector<VertexId> seq{inst.root()};
    for (EdgeId e : tour.edges)
      seq.push_back(inst.edge(e).head);
    std::vector<char> used(static_cast<size_t>(inst.num_edges()), 0);
    for (EdgeId e : tour.edges)
      used[static_cast<size_t>(e)] = 1;

    std::vector<char> seen(static_cast<size_t>(inst.num_vertices()), 0);
    seen[static_cast<size_t>(seq[0])] = 1;
    for (size_t j = 1; j + 1 < seq.size(); ++j) {
      VertexId v = seq[j];
      if (!seen[static_cast<size_t>(v)]) {
        seen[static_cast<size_t>(v)] = 1;
        continue;
      }
      VertexId before = seq[j - 1];
      VertexId after = seq[j + 1];
      EdgeId in_e = tour.edges[j - 1];
      EdgeId out_e = tour.edges[j];
      double detour = inst.edge(in_e).cost + inst.edge(out_e).cost;
      if (before == after) {
        // Drop the out-and-back detour entirely.
        tour.edges.erase(tour.edges.begin() + static_cast<long>(j - 1),
                         tour.edges.begin() + static_cast<long>(j + 1));
        changed = true;
        break;
      }
      EdgeId bypass = inst.find_edge(before, after);
      if (bypass >= 0 && !used[static_cast<size_t>(bypass)] &&
          inst.edge(bypass).cost <= detour) {
        tour.edges[j - 1] = bypass;
        tour.edges.erase(tour.edges.begin() + static_cast<long>(j));
        changed = true;
        break;
      }
    }
  }
}

// Depth-first doubling of the undirected tree edge set; every undirected
// edge is walked once in each direction.
std::optional<Tour> doubled_tree_tour(const GipInstance &inst,
                                      const CoveringTree &tree) {
  // Collapse the multiset to undirected pairs with both arcs present.
  std::vector<std::vector<std::pair<VertexId, std::pair<EdgeId, EdgeId>>>> adj(
      static_cast<size_t>(inst.num_vertices()));
  std::vector<std::pair<VertexId, VertexId>> added;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (!tree.edge_count[static_cast<size_t>(e)])
      continue;
    VertexId a = inst.edge(e).tail;
    VertexId b = inst.edge(e).head;
    VertexId lo = std::min(a, b), hi = std::max(a, b);
    if (std::find(added.begin(), added.end(), std::make_pair(lo, hi)) !=
        added.end())
      continue;
    EdgeId fwd = inst.find_edge(lo, hi);
    EdgeId rev = inst.find_edge(hi, lo);
    if (fwd < 0 || rev < 0)
      return std::nullopt; // no opposite arc; doubling unavailable
    added.push_back({lo, hi});
    adj[static_cast<size_t>(lo)].push_back({hi, {fwd, rev}});
    adj[static_cast<size_t>(hi)].push_back({lo, {rev, fwd}});
  }
  for (auto &lst : adj)
    std::sort(lst.begin(), lst.end());

  Tour tour;
  std::vector<char> visited(static_cast<size_t>(inst.num_vertices()), 0);
  // Iterative DFS emitting the descend arc before the subtree and the
  // return arc after it.
  struct Frame {
    VertexId v;
    size_t next = 0;
    EdgeId return_edge = -1;
  };
  std::vector<Frame> stack{{inst.root(), 0, -1}};
  visited[static_cast<size_t>(inst.root())] = 1;
  while (!stack.empty()) {
    Frame &f = stack.back();
    if (f.next < adj[static_cast<size_t>(f.v)].size()) {
      auto [w, arcs] = adj[static_cast<size_t>(f.v)][f.next++];
      if (visited[static_cast<size_t>(w)])
        continue;
      visited[static_cast<size_t>(w)] = 1;
      tour.edges.push_back(arcs.first);
      stack.push_back({w, 0, arcs.second});
    } else {
      if (f.return_edge >= 0)
        tour.edges.push_back(f.return_edge);
      stack.pop_back();
    }
  }
  return tour;
}

// Cheapest closed walk from the root when the tree has no edges.
std::optional<Tour> root_cycle_tour(const GipInstance &inst,
                                    const std::vector<double> &discounted,
                                    WorkMeter *meter) {
  std::optional<Tour> best;
  double best_cost = kInfCost;
  for (EdgeId e : inst.out_edges(inst.root())) {
    VertexId v = inst.edge(e).head;
    std::vector<char> used(static_cast<size_t>(inst.num_edges()), 0);
    used[static_cast<size_t>(e)] = 1;
    ShortestPathTree sp = dijkstra(inst, discounted, {v}, used);
    if (meter)
      meter->add(dijkstra_units(inst));
    if (sp.dist[static_cast<size_t>(inst.root())] == kInfCost)
      continue;
    double c = discounted[static_cast<size_t>(e)] +
               sp.dist[static_cast<size_t>(inst.root())];
    if (c < best_cost) {
      best_cost = c;
      Tour t;
      t.edges.push_back(e);
      std::vector<EdgeId> back = extract_path(sp, inst, inst.root());
      t.edges.insert(t.edges.end(), back.begin(), back.end());
      best = std::move(t);
    }
  }
  return best;
}

struct Pairing {
  std::vector<std::pair<VertexId, VertexId>> pairs;
};

std::optional<Pairing>
greedy_pairing(const std::vector<VertexId> &odd,
               const std::vector<std::vector<double>> &sym) {
  Pairing result;
  std::vector<char> taken(odd.size(), 0);
  size_t remaining = odd.size();
  while (remaining > 0) {
    double best = kInfCost;
    size_t bi = 0, bj = 0;
    for (size_t i = 0; i < odd.size(); ++i) {
      if (taken[i])
        continue;
      for (size_t j = i + 1; j < odd.size(); ++j) {
        if (taken[j])
          continue;
        if (sym[i][j] < best) {
          best = sym[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    if (best == kInfCost)
      return std::nullopt;
    taken[bi] = taken[bj] = 1;
    remaining -= 2;
    result.pairs.push_back({odd[bi], odd[bj]});
  }
  return result;
}

std::optional<Pairing>
exact_pairing(const std::vector<VertexId> &odd,
              const std::vector<std::vector<double>> &sym) {
  const int n = static_cast<int>(odd.size());
  if (n == 0)
    return Pairing{};
  const size_t full = 1ull << n;
  std::vector<double> dp(full, kInfCost);
  std::vector<int> choice(full, -1);
  dp[0] = 0.0;
  for (size_t mask = 1; mask < full; ++mask) {
    int first = -1;
    for (int i = 0; i < n; ++i) {
      if (mask & (1ull << i)) {
        first = i;
        break;
      }
    }
    int bits = 0;
    for (int i = 0; i < n; ++i)
      bits += (mask >> i) & 1;
    if (bits % 2 != 0)
      continue;
    for (int j = first + 1; j < n; ++j) {
      if (!(mask & (1ull << j)))
        continue;
      size_t rest = mask ^ (1ull << first) ^ (1ull << j);
      double c = dp[rest] + sym[static_cast<size_t>(first)][static_cast<size_t>(j)];
      if (c < dp[mask]) {
        dp[mask] = c;
        choice[mask] = j;
      }
    }
  }
  if (dp[full - 1] == kInfCost)
    return std::nullopt;
  Pairing result;
  size_t mask = full - 1;
  while (mask) {
    int first = -1;
    for (int i = 0; i < n; ++i) {
      if (mask & (1ull << i)) {
        first = i;
        break;
      }
    }
    int j = choice[mask];
    result.pairs.push_back({odd[static_cast<size_t>(first)],
                            odd[static_cast<size_t>(j)]});
    mask ^= (1ull << first) ^ (1ull << static_cast<size_t>(j));
  }
  return result;
}

std::optional<Tour> matched_tour(const GipInstance &inst,
                                 const CoveringTree &tree,
                                 const Pairing &pairing,
                                 const std::vector<double> &discounted,
                                 WorkMeter *meter) {
  std::vector<Step> steps;
  for (EdgeId e = 0; e < inst.num_edges(); ++e)
    for (int c = 0; c < tree.edge_count[static_cast<size_t>(e)]; ++c)
      steps.push_back({inst.edge(e).tail, inst.edge(e).head});
  for (const auto &[u, v] : pairing.pairs)
    steps.push_back({u, v});
  try {
    auto hops = euler_steps(steps, inst.root(), inst.num_vertices());
    return realize_circuit(inst, discounted, hops, meter);
  } catch (const Error &) {
    return std::nullopt;
  }
}

} // namespace

Tour tree_to_tour(const GipInstance &inst, const CoveringTree &tree,
                  MatchMode mode, const std::vector<double> &discounted,
                  int *odd_count_out, WorkMeter *meter) {
  if (!tree.in_tree[static_cast<size_t>(inst.root())])
    throw Error(ErrorCode::OutOfRange, "tree must contain the root");

  // Odd-degree vertices of the undirected tree multiset.
  std::vector<int> degree(static_cast<size_t>(inst.num_vertices()), 0);
  bool any_edges = false;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    int c = tree.edge_count[static_cast<size_t>(e)];
    if (c == 0)
      continue;
    any_edges = true;
    degree[static_cast<size_t>(inst.edge(e).tail)] += c;
    degree[static_cast<size_t>(inst.edge(e).head)] += c;
  }
  std::vector<VertexId> odd;
  for (VertexId v = 0; v < inst.num_vertices(); ++v)
    if (degree[static_cast<size_t>(v)] % 2 == 1)
      odd.push_back(v);
  if (odd_count_out)
    *odd_count_out = static_cast<int>(odd.size());

  if (!any_edges) {
    auto cycle = root_cycle_tour(inst, discounted, meter);
    if (!cycle)
      throw Error(ErrorCode::NoDirectedRealization,
                  "no closed walk through the root exists");
    shortcut_walk(inst, *cycle);
    return *cycle;
  }

  if (mode == MatchMode::Exact &&
      static_cast<int>(odd.size()) > kExactMatchingLimit)
    throw Error(ErrorCode::MatchingFailed,
                "exact matching supports at most " +
                    std::to_string(kExactMatchingLimit) +
                    " odd vertices, got " + std::to_string(odd.size()));

  // Pairwise symmetric distances between odd vertices.
  std::vector<std::vector<double>> to_all(odd.size());
  for (size_t i = 0; i < odd.size(); ++i) {
    to_all[i] = dijkstra(inst, discounted, {odd[i]}).dist;
    if (meter)
      meter->add(dijkstra_units(inst));
  }
  std::vector<std::vector<double>> sym(odd.size(),
                                       std::vector<double>(odd.size(), kInfCost));
  for (size_t i = 0; i < odd.size(); ++i) {
    for (size_t j = i + 1; j < odd.size(); ++j) {
      double fwd = to_all[i][static_cast<size_t>(odd[j])];
      double bwd = to_all[j][static_cast<size_t>(odd[i])];
      if (fwd < kInfCost && bwd < kInfCost)
        sym[i][j] = sym[j][i] = 0.5 * (fwd + bwd);
    }
  }

  std::vector<Tour> candidates;
  auto consider = [&](std::optional<Tour> t) {
    if (t)
      candidates.push_back(std::move(*t));
  };

  if (auto pairing = greedy_pairing(odd, sym))
    consider(matched_tour(inst, tree, *pairing, discounted, meter));
  if (mode == MatchMode::Exact) {
    if (auto pairing = exact_pairing(odd, sym))
      consider(matched_tour(inst, tree, *pairing, discounted, meter));
  }
  consider(doubled_tree_tour(inst, tree));

  if (candidates.empty())
    throw Error(ErrorCode::NoDirectedRealization,
                "no directed realization of the covering tree exists");

  Tour best;
  double best_cost = kInfCost;
  for (Tour &t : candidates) {
    shortcut_walk(inst, t);
    double c = real_cost(inst, t);
    if (c < best_cost) {
      best_cost = c;
      best = std::move(t);
    }
  }
  return best;
}

HeuristicResult run_heuristic(const GipInstance &inst,
                              const std::vector<double> *lp_values,
                              MatchMode mode, TreeMode tree_mode,
                              WorkMeter *meter) {
  std::vector<double> discounted = discount_costs(inst, lp_values);
  CoveringTree tree = build_covering_tree(inst, discounted, tree_mode, meter);
  HeuristicResult result;
  result.tree_cost = tree.cost;
  result.tour = tree_to_tour(inst, tree, mode, discounted,
                             &result.odd_vertex_count, meter);
  VerifyResult verdict = verify_tour(inst, result.tour);
  if (!verdict.feasible())
    throw Error(ErrorCode::NoDirectedRealization,
                "heuristic produced an invalid tour: " +
                    to_string(verdict.kind));
  result.cost = verdict.cost;
  return result;
}

} // namespace gip
