#include "gip/separation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <random>
#include <thread>

#include "gip/graph_algo.hpp"
#include "gip/lp.hpp"

namespace gip {

namespace {
constexpr double kResidualTol = 1e-12;
} // namespace

Candidate make_candidate(const GipInstance &inst, std::vector<double> values) {
  if (static_cast<int>(values.size()) != inst.num_edges())
    throw Error(ErrorCode::OutOfRange, "candidate values must cover every edge");
  Candidate cand;
  cand.integral = true;
  for (double &v : values) {
    if (v < -kIntegralityTol || v > 1.0 + kIntegralityTol)
      throw Error(ErrorCode::OutOfRange, "candidate value outside [0,1]");
    v = std::clamp(v, 0.0, 1.0);
    if (std::abs(v - std::round(v)) > kIntegralityTol)
      cand.integral = false;
  }
  cand.values = std::move(values);
  return cand;
}

std::optional<Cut> separate_connectivity(const GipInstance &inst,
                                         const Candidate &cand,
                                         const std::vector<int> *group_filter) {
  if (!cand.integral)
    throw Error(ErrorCode::NotIntegral,
                "connectivity separation requires an integral candidate");
  std::vector<char> selected(static_cast<size_t>(inst.num_edges()), 0);
  for (EdgeId e = 0; e < inst.num_edges(); ++e)
    selected[static_cast<size_t>(e)] =
        cand.values[static_cast<size_t>(e)] > 0.5 ? 1 : 0;

  std::vector<char> scc = scc_of_vertex(inst, selected, inst.root());

  auto check_group = [&](int i) -> bool {
    for (VertexId v : inst.group(i))
      if (scc[static_cast<size_t>(v)])
        return true;
    return false;
  };

  int violated = -1;
  if (group_filter) {
    for (int i : *group_filter) {
      if (!check_group(i)) {
        violated = i;
        break;
      }
    }
  } else {
    for (int i = 0; i < inst.num_groups(); ++i) {
      if (!check_group(i)) {
        violated = i;
        break;
      }
    }
  }
  if (violated < 0)
    return std::nullopt;

  Cut cut;
  cut.in_r = std::move(scc);
  cut.excluded_group = violated;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    const Edge &edge = inst.edge(e);
    if (cut.in_r[static_cast<size_t>(edge.tail)] &&
        !cut.in_r[static_cast<size_t>(edge.head)])
      cut.leaving_edges.push_back(e);
  }
  return cut;
}

MaxFlowResult max_flow_min_cut(const GipInstance &inst,
                               const std::vector<double> &capacities,
                               VertexId source,
                               const std::vector<VertexId> &sinks) {
  // Arc list with residual twins; vertex n is the virtual sink.
  const int n = inst.num_vertices();
  const int sink = n;
  struct Arc {
    int to;
    double cap;
    int twin;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> adj(static_cast<size_t>(n + 1));
  auto add_arc = [&](int from, int to, double cap) {
    adj[static_cast<size_t>(from)].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({to, cap, static_cast<int>(arcs.size()) + 1});
    adj[static_cast<size_t>(to)].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({from, 0.0, static_cast<int>(arcs.size()) - 1});
  };
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    double cap = capacities[static_cast<size_t>(e)];
    if (cap < 0.0)
      throw Error(ErrorCode::OutOfRange, "negative arc capacity");
    add_arc(inst.edge(e).tail, inst.edge(e).head, cap);
  }
  for (VertexId v : sinks) {
    if (v == source)
      throw Error(ErrorCode::OutOfRange, "source cannot be a sink");
    add_arc(v, sink, 1.0);
  }

  double flow = 0.0;
  std::vector<int> pred_arc(static_cast<size_t>(n + 1));
  while (true) {
    // BFS for a shortest augmenting path.
    std::fill(pred_arc.begin(), pred_arc.end(), -1);
    std::deque<int> queue{source};
    pred_arc[static_cast<size_t>(source)] = -2;
    while (!queue.empty() && pred_arc[static_cast<size_t>(sink)] == -1) {
      int v = queue.front();
      queue.pop_front();
      for (int a : adj[static_cast<size_t>(v)]) {
        if (arcs[static_cast<size_t>(a)].cap <= kResidualTol)
          continue;
        int w = arcs[static_cast<size_t>(a)].to;
        if (pred_arc[static_cast<size_t>(w)] != -1)
          continue;
        pred_arc[static_cast<size_t>(w)] = a;
        queue.push_back(w);
      }
    }
    if (pred_arc[static_cast<size_t>(sink)] == -1)
      break;
    double push = std::numeric_limits<double>::infinity();
    for (int v = sink; v != source;) {
      int a = pred_arc[static_cast<size_t>(v)];
      push = std::min(push, arcs[static_cast<size_t>(a)].cap);
      v = arcs[static_cast<size_t>(arcs[static_cast<size_t>(a)].twin)].to;
    }
    for (int v = sink; v != source;) {
      int a = pred_arc[static_cast<size_t>(v)];
      arcs[static_cast<size_t>(a)].cap -= push;
      arcs[static_cast<size_t>(arcs[static_cast<size_t>(a)].twin)].cap += push;
      v = arcs[static_cast<size_t>(arcs[static_cast<size_t>(a)].twin)].to;
    }
    flow += push;
  }

  MaxFlowResult result;
  result.flow_value = flow;
  // Residual reachability from the source gives the min-cut side.
  std::vector<char> side(static_cast<size_t>(n + 1), 0);
  std::vector<int> stack{source};
  side[static_cast<size_t>(source)] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int a : adj[static_cast<size_t>(v)]) {
      if (arcs[static_cast<size_t>(a)].cap <= kResidualTol)
        continue;
      int w = arcs[static_cast<size_t>(a)].to;
      if (!side[static_cast<size_t>(w)]) {
        side[static_cast<size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  side.resize(static_cast<size_t>(n)); // drop the virtual sink
  result.source_side = std::move(side);
  return result;
}

namespace {

int oracle_thread_count(int jobs) {
  const char *env = std::getenv("GIP_THREADS");
  long requested = 0; // 0 = auto
  if (env && *env)
    requested = std::strtol(env, nullptr, 10);
  if (requested <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    requested = hw == 0 ? 1 : static_cast<long>(std::min(hw, 8u));
  }
  return static_cast<int>(std::min<long>(requested, jobs));
}

std::optional<Cut> flow_cut_for_group(const GipInstance &inst,
                                      const Candidate &cand, int group_id) {
  const auto &members = inst.group(group_id);
  if (members.empty())
    return std::nullopt; // no finite cut separates an empty group
  MaxFlowResult mf =
      max_flow_min_cut(inst, cand.values, inst.root(), members);
  if (mf.flow_value >= 1.0 - kCutViolationTol)
    return std::nullopt;

  Cut cut;
  cut.in_r = std::move(mf.source_side);
  cut.excluded_group = group_id;
  double crossing = 0.0;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    const Edge &edge = inst.edge(e);
    if (cut.in_r[static_cast<size_t>(edge.tail)] &&
        !cut.in_r[static_cast<size_t>(edge.head)]) {
      cut.leaving_edges.push_back(e);
      crossing += cand.values[static_cast<size_t>(e)];
    }
  }
  // Alg. line-7 recheck: the cut really is violated by the candidate.
  if (crossing >= 1.0 - kCutViolationTol)
    return std::nullopt;
  return cut;
}

} // namespace

std::vector<Cut> separate_flow(const GipInstance &inst, const Candidate &cand,
                               const std::vector<int> &group_ids) {
  std::vector<std::optional<Cut>> per_group(group_ids.size());
  int workers = oracle_thread_count(static_cast<int>(group_ids.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < group_ids.size(); ++i)
      per_group[i] = flow_cut_for_group(inst, cand, group_ids[i]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (size_t i = static_cast<size_t>(w); i < group_ids.size();
             i += static_cast<size_t>(workers))
          per_group[i] = flow_cut_for_group(inst, cand, group_ids[i]);
      });
    }
    for (auto &t : pool)
      t.join();
  }

  std::vector<Cut> cuts;
  for (auto &maybe : per_group)
    if (maybe)
      cuts.push_back(std::move(*maybe));
  return cuts;
}

std::vector<Cut> separate_combined(const GipInstance &inst,
                                   const Candidate &cand, int sample_size,
                                   std::uint64_t rng_seed,
                                   const std::vector<int> *group_filter) {
  if (sample_size < 1)
    throw Error(ErrorCode::OutOfRange, "sample size must be at least one");
  if (cand.integral) {
    std::vector<Cut> cuts;
    if (auto cut = separate_connectivity(inst, cand, group_filter))
      cuts.push_back(std::move(*cut));
    return cuts;
  }

  std::vector<int> pool;
  if (group_filter)
    pool = *group_filter;
  else {
    pool.resize(static_cast<size_t>(inst.num_groups()));
    for (int i = 0; i < inst.num_groups(); ++i)
      pool[static_cast<size_t>(i)] = i;
  }

  // Uniform draw without replacement; partial Fisher-Yates under the given
  // seed keeps the draw reproducible.
  std::mt19937_64 rng(rng_seed);
  const size_t take = std::min<size_t>(static_cast<size_t>(sample_size), pool.size());
  for (size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  std::vector<int> sampled(pool.begin(), pool.begin() + static_cast<long>(take));
  std::sort(sampled.begin(), sampled.end());
  return separate_flow(inst, cand, sampled);
}

} // namespace gip
