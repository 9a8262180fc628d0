/**
 * @file separation.hpp
 * @brief Separation oracles for lazy group-cutset constraints: connectivity
 *        check for integral candidates, max-flow/min-cut for fractional
 *        ones, and the sampled combination of the two.
 */

#ifndef GIP_SEPARATION_HPP
#define GIP_SEPARATION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "gip/formulation.hpp"
#include "gip/instance.hpp"

namespace gip {

/// Per-edge solution values of a node relaxation.
struct Candidate {
  std::vector<double> values; // indexed by edge id, within [0,1]
  bool integral = false;
};

Candidate make_candidate(const GipInstance &inst, std::vector<double> values);

/// A violated group-cutset inequality, identified by its root-side set.
struct Cut {
  std::vector<char> in_r;            // vertex membership of R
  int excluded_group = -1;
  std::vector<EdgeId> leaving_edges; // delta+(R), sorted by edge id
};

/**
 * @brief Connectivity oracle for integral candidates.
 *
 * Builds the selected subgraph, takes the strongly connected component of
 * the root, and returns a cut for the lowest-indexed group the component
 * misses; nullopt means the candidate satisfies every group-cutset row.
 * `group_filter`, when given, restricts the check to those group ids.
 */
std::optional<Cut>
separate_connectivity(const GipInstance &inst, const Candidate &cand,
                      const std::vector<int> *group_filter = nullptr);

struct MaxFlowResult {
  double flow_value = 0.0;
  std::vector<char> source_side; // min-cut side containing the source
};

/**
 * @brief Max flow from `source` to a virtual sink behind `sinks`.
 *
 * Interprets `capacities` as per-edge capacities and augments the graph
 * with unit-capacity arcs from every sink vertex to a virtual sink, then
 * runs shortest-augmenting-path max flow. The returned cut side is the set
 * of vertices reachable from the source in the final residual network.
 */
MaxFlowResult max_flow_min_cut(const GipInstance &inst,
                               const std::vector<double> &capacities,
                               VertexId source,
                               const std::vector<VertexId> &sinks);

/// Flow oracle over the listed groups; emits one cut per group whose
/// max flow from the root falls below one. Honors GIP_THREADS.
std::vector<Cut> separate_flow(const GipInstance &inst, const Candidate &cand,
                               const std::vector<int> &group_ids);

/// Combined oracle: connectivity for integral candidates, sampled flow
/// separation for fractional ones. Samples uniformly without replacement.
std::vector<Cut> separate_combined(const GipInstance &inst,
                                   const Candidate &cand, int sample_size,
                                   std::uint64_t rng_seed,
                                   const std::vector<int> *group_filter = nullptr);

} // namespace gip

#endif // GIP_SEPARATION_HPP
