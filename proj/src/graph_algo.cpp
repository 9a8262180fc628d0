#include "gip/graph_algo.hpp"

#include <algorithm>
#include <queue>

namespace gip {

std::vector<char> reachable_from(const GipInstance &inst,
                                 const std::vector<char> &edge_selected,
                                 VertexId start) {
  std::vector<char> seen(static_cast<size_t>(inst.num_vertices()), 0);
  std::vector<VertexId> stack{start};
  seen[static_cast<size_t>(start)] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (EdgeId e : inst.out_edges(v)) {
      if (!edge_selected[static_cast<size_t>(e)])
        continue;
      VertexId w = inst.edge(e).head;
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

std::vector<char> scc_of_vertex(const GipInstance &inst,
                                const std::vector<char> &edge_selected,
                                VertexId start) {
  std::vector<char> fwd = reachable_from(inst, edge_selected, start);
  // Backward pass over in-edges.
  std::vector<char> bwd(static_cast<size_t>(inst.num_vertices()), 0);
  std::vector<VertexId> stack{start};
  bwd[static_cast<size_t>(start)] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (EdgeId e : inst.in_edges(v)) {
      if (!edge_selected[static_cast<size_t>(e)])
        continue;
      VertexId w = inst.edge(e).tail;
      if (!bwd[static_cast<size_t>(w)]) {
        bwd[static_cast<size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  std::vector<char> scc(static_cast<size_t>(inst.num_vertices()), 0);
  for (VertexId v = 0; v < inst.num_vertices(); ++v)
    scc[static_cast<size_t>(v)] =
        fwd[static_cast<size_t>(v)] && bwd[static_cast<size_t>(v)];
  return scc;
}

std::vector<char> root_component_edges(const GipInstance &inst,
                                       const std::vector<char> &edge_selected,
                                       VertexId root) {
  std::vector<char> scc = scc_of_vertex(inst, edge_selected, root);
  std::vector<char> kept(static_cast<size_t>(inst.num_edges()), 0);
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (!edge_selected[static_cast<size_t>(e)])
      continue;
    const Edge &edge = inst.edge(e);
    if (scc[static_cast<size_t>(edge.tail)] && scc[static_cast<size_t>(edge.head)])
      kept[static_cast<size_t>(e)] = 1;
  }
  return kept;
}

Tour eulerian_circuit(const GipInstance &inst,
                      const std::vector<char> &edge_selected, VertexId start) {
  // Hierholzer with per-vertex cursors; adjacency in edge-id order keeps the
  // traversal deterministic.
  std::vector<std::vector<EdgeId>> adj(static_cast<size_t>(inst.num_vertices()));
  int selected_count = 0;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    if (edge_selected[static_cast<size_t>(e)]) {
      adj[static_cast<size_t>(inst.edge(e).tail)].push_back(e);
      ++selected_count;
    }
  }
  Tour tour;
  if (selected_count == 0)
    return tour;

  std::vector<size_t> cursor(static_cast<size_t>(inst.num_vertices()), 0);
  std::vector<EdgeId> stack_edges;
  std::vector<VertexId> stack{start};
  std::vector<EdgeId> circuit;
  while (!stack.empty()) {
    VertexId v = stack.back();
    auto &edges_here = adj[static_cast<size_t>(v)];
    if (cursor[static_cast<size_t>(v)] < edges_here.size()) {
      EdgeId e = edges_here[cursor[static_cast<size_t>(v)]++];
      stack.push_back(inst.edge(e).head);
      stack_edges.push_back(e);
    } else {
      stack.pop_back();
      if (!stack_edges.empty()) {
        circuit.push_back(stack_edges.back());
        stack_edges.pop_back();
      }
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  if (static_cast<int>(circuit.size()) != selected_count)
    throw Error(ErrorCode::InvalidInstance,
                "selection is not Eulerian from the requested start");
  tour.edges = std::move(circuit);
  return tour;
}

ShortestPathTree dijkstra(const GipInstance &inst,
                          const std::vector<double> &edge_costs,
                          const std::vector<VertexId> &sources,
                          const std::vector<char> &skip_edge) {
  ShortestPathTree tree;
  tree.dist.assign(static_cast<size_t>(inst.num_vertices()), kInfCost);
  tree.pred_edge.assign(static_cast<size_t>(inst.num_vertices()), -1);

  using Entry = std::pair<double, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (VertexId s : sources) {
    tree.dist[static_cast<size_t>(s)] = 0.0;
    heap.push({0.0, s});
  }
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > tree.dist[static_cast<size_t>(v)])
      continue;
    for (EdgeId e : inst.out_edges(v)) {
      if (!skip_edge.empty() && skip_edge[static_cast<size_t>(e)])
        continue;
      double nd = d + edge_costs[static_cast<size_t>(e)];
      VertexId w = inst.edge(e).head;
      double &dw = tree.dist[static_cast<size_t>(w)];
      // Strict improvement only: first settled path wins ties, and the heap
      // orders equal keys by vertex id, so the tree is reproducible.
      if (nd < dw) {
        dw = nd;
        tree.pred_edge[static_cast<size_t>(w)] = e;
        heap.push({nd, w});
      }
    }
  }
  return tree;
}

std::vector<EdgeId> extract_path(const ShortestPathTree &tree,
                                 const GipInstance &inst, VertexId target) {
  if (tree.dist[static_cast<size_t>(target)] == kInfCost)
    throw Error(ErrorCode::Unreachable, "target not reached by shortest-path tree");
  std::vector<EdgeId> path;
  VertexId at = target;
  while (tree.pred_edge[static_cast<size_t>(at)] != -1) {
    EdgeId e = tree.pred_edge[static_cast<size_t>(at)];
    path.push_back(e);
    at = inst.edge(e).tail;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

AllPairs all_pairs_shortest_paths(const GipInstance &inst,
                                  const std::vector<double> &edge_costs) {
  AllPairs ap;
  ap.dist.resize(static_cast<size_t>(inst.num_vertices()));
  ap.pred_edge.resize(static_cast<size_t>(inst.num_vertices()));
  for (VertexId u = 0; u < inst.num_vertices(); ++u) {
    ShortestPathTree tree = dijkstra(inst, edge_costs, {u});
    ap.dist[static_cast<size_t>(u)] = std::move(tree.dist);
    ap.pred_edge[static_cast<size_t>(u)] = std::move(tree.pred_edge);
  }
  return ap;
}

} // namespace gip
