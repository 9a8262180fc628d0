#include "gip/formulation.hpp"

#include <limits>
#include <string>

namespace gip {

namespace {
constexpr double kInfBound = std::numeric_limits<double>::infinity();
}

FormulationHandle build_baseline(const GipInstance &inst) {
  for (int i = 0; i < inst.num_groups(); ++i)
    if (inst.group(i).empty())
      throw Error(ErrorCode::EmptyGroup,
                  "group " + std::to_string(i) + " has no member vertices", i);

  FormulationHandle h;
  h.instance = &inst;
  h.flavor = Flavor::Baseline;
  h.edge_var.resize(static_cast<size_t>(inst.num_edges()));

  SparseRow objective;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    const Edge &edge = inst.edge(e);
    int var = h.model.add_variable("x_" + std::to_string(edge.tail) + "_" +
                                       std::to_string(edge.head),
                                   0.0, 1.0, true);
    h.edge_var[static_cast<size_t>(e)] = var;
    objective.push_back({var, edge.cost});
  }
  h.model.set_objective(std::move(objective));

  // The tour must leave the root.
  SparseRow root_row;
  for (EdgeId e : inst.out_edges(inst.root()))
    root_row.push_back({h.edge_var[static_cast<size_t>(e)], 1.0});
  h.model.add_constraint(std::move(root_row), Sense::GreaterEqual, 1.0);

  // Every group needs a visited member: one selected edge entering the group.
  h.coverage_row.resize(static_cast<size_t>(inst.num_groups()));
  for (int i = 0; i < inst.num_groups(); ++i) {
    SparseRow row;
    for (VertexId v : inst.group(i))
      for (EdgeId e : inst.in_edges(v))
        row.push_back({h.edge_var[static_cast<size_t>(e)], 1.0});
    h.coverage_row[static_cast<size_t>(i)] =
        h.model.add_constraint(std::move(row), Sense::GreaterEqual, 1.0);
  }

  // In-degree equals out-degree at every vertex.
  for (VertexId v = 0; v < inst.num_vertices(); ++v) {
    SparseRow row;
    for (EdgeId e : inst.in_edges(v))
      row.push_back({h.edge_var[static_cast<size_t>(e)], 1.0});
    for (EdgeId e : inst.out_edges(v))
      row.push_back({h.edge_var[static_cast<size_t>(e)], -1.0});
    h.model.add_constraint(std::move(row), Sense::Equal, 0.0);
  }
  return h;
}

FormulationHandle add_scf(FormulationHandle h) {
  if (h.flavor != Flavor::Baseline)
    throw Error(ErrorCode::WrongFlavor,
                "single-commodity flow attaches to the baseline model only");
  const GipInstance &inst = *h.instance;
  const double capacity = 2.0 * (inst.num_vertices() - 1);

  std::vector<int> flow_var(static_cast<size_t>(inst.num_edges()));
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    const Edge &edge = inst.edge(e);
    flow_var[static_cast<size_t>(e)] =
        h.model.add_variable("f_" + std::to_string(edge.tail) + "_" +
                                 std::to_string(edge.head),
                             0.0, kInfBound, false);
    // Flow only on selected edges.
    h.model.add_constraint({{flow_var[static_cast<size_t>(e)], 1.0},
                            {h.edge_var[static_cast<size_t>(e)], -capacity}},
                           Sense::LessEqual, 0.0);
  }

  // Consumption rule: incoming flow minus outgoing flow equals the number of
  // selected outgoing edges, at every vertex except the root.
  for (VertexId v = 0; v < inst.num_vertices(); ++v) {
    if (v == inst.root())
      continue;
    SparseRow row;
    for (EdgeId e : inst.in_edges(v))
      row.push_back({flow_var[static_cast<size_t>(e)], 1.0});
    for (EdgeId e : inst.out_edges(v))
      row.push_back({flow_var[static_cast<size_t>(e)], -1.0});
    for (EdgeId e : inst.out_edges(v))
      row.push_back({h.edge_var[static_cast<size_t>(e)], -1.0});
    h.model.add_constraint(std::move(row), Sense::Equal, 0.0);
  }
  h.flavor = Flavor::Scf;
  return h;
}

FormulationHandle add_mcf(FormulationHandle h, long size_guard) {
  if (h.flavor != Flavor::Baseline)
    throw Error(ErrorCode::WrongFlavor,
                "multi-commodity flow attaches to the baseline model only");
  const GipInstance &inst = *h.instance;
  const long flow_vars =
      static_cast<long>(inst.num_groups()) * inst.num_edges();
  if (flow_vars > size_guard)
    throw Error(ErrorCode::TooLarge,
                "multi-commodity model needs " + std::to_string(flow_vars) +
                    " flow variables, above the memory guard of " +
                    std::to_string(size_guard));

  for (int i = 0; i < inst.num_groups(); ++i) {
    std::vector<int> fv(static_cast<size_t>(inst.num_edges()));
    for (EdgeId e = 0; e < inst.num_edges(); ++e) {
      const Edge &edge = inst.edge(e);
      fv[static_cast<size_t>(e)] = h.model.add_variable(
          "f" + std::to_string(i) + "_" + std::to_string(edge.tail) + "_" +
              std::to_string(edge.head),
          0.0, 1.0, false);
    }

    // One unit of this commodity leaves the root. Under partial coverage
    // the unit is owed only when the group is selected.
    SparseRow emit;
    for (EdgeId e : inst.out_edges(inst.root()))
      emit.push_back({fv[static_cast<size_t>(e)], 1.0});
    if (h.partial_q) {
      emit.push_back({h.group_select_var[static_cast<size_t>(i)], -1.0});
      h.model.add_constraint(std::move(emit), Sense::GreaterEqual, 0.0);
    } else {
      h.model.add_constraint(std::move(emit), Sense::GreaterEqual, 1.0);
    }

    // Net inflow of one unit into the group.
    SparseRow absorb;
    for (VertexId v : inst.group(i)) {
      for (EdgeId e : inst.in_edges(v))
        absorb.push_back({fv[static_cast<size_t>(e)], 1.0});
      for (EdgeId e : inst.out_edges(v))
        absorb.push_back({fv[static_cast<size_t>(e)], -1.0});
    }
    if (h.partial_q) {
      absorb.push_back({h.group_select_var[static_cast<size_t>(i)], -1.0});
      h.model.add_constraint(std::move(absorb), Sense::GreaterEqual, 0.0);
    } else {
      h.model.add_constraint(std::move(absorb), Sense::GreaterEqual, 1.0);
    }

    // Conservation away from the group and the root.
    for (VertexId v = 0; v < inst.num_vertices(); ++v) {
      if (v == inst.root() || inst.group_contains(i, v))
        continue;
      SparseRow row;
      for (EdgeId e : inst.in_edges(v))
        row.push_back({fv[static_cast<size_t>(e)], 1.0});
      for (EdgeId e : inst.out_edges(v))
        row.push_back({fv[static_cast<size_t>(e)], -1.0});
      h.model.add_constraint(std::move(row), Sense::Equal, 0.0);
    }

    // Commodity flow only on selected edges.
    for (EdgeId e = 0; e < inst.num_edges(); ++e)
      h.model.add_constraint({{fv[static_cast<size_t>(e)], 1.0},
                              {h.edge_var[static_cast<size_t>(e)], -1.0}},
                             Sense::LessEqual, 0.0);
  }
  h.flavor = Flavor::Mcf;
  return h;
}

FormulationHandle add_group_cutset(FormulationHandle h) {
  if (h.flavor != Flavor::Baseline)
    throw Error(ErrorCode::WrongFlavor,
                "group-cutset solving starts from the baseline model only");
  h.flavor = Flavor::GroupCutset;
  return h;
}

CutsetRow group_cutset_constraint(const GipInstance &inst,
                                  const std::vector<char> &in_r,
                                  const std::vector<int> &edge_var) {
  if (!in_r[static_cast<size_t>(inst.root())])
    throw Error(ErrorCode::RootNotInR, "cut set must contain the root");
  bool excludes_some_group = false;
  for (int i = 0; i < inst.num_groups() && !excludes_some_group; ++i) {
    bool intersects = false;
    for (VertexId v : inst.group(i)) {
      if (in_r[static_cast<size_t>(v)]) {
        intersects = true;
        break;
      }
    }
    if (!intersects && !inst.group(i).empty())
      excludes_some_group = true;
  }
  if (!excludes_some_group)
    throw Error(ErrorCode::NoExcludedGroup,
                "cut set must exclude at least one whole group");

  CutsetRow cut;
  for (EdgeId e = 0; e < inst.num_edges(); ++e) {
    const Edge &edge = inst.edge(e);
    if (in_r[static_cast<size_t>(edge.tail)] && !in_r[static_cast<size_t>(edge.head)]) {
      cut.leaving_edges.push_back(e);
      cut.row.push_back({edge_var[static_cast<size_t>(e)], 1.0});
    }
  }
  return cut;
}

FormulationHandle add_partial_coverage(FormulationHandle h, int q) {
  if (h.flavor != Flavor::Baseline)
    throw Error(ErrorCode::WrongFlavor,
                "partial coverage attaches before a subtour-elimination family");
  if (h.partial_q)
    throw Error(ErrorCode::WrongFlavor, "partial coverage already attached");
  const GipInstance &inst = *h.instance;
  if (q < 0 || q > inst.num_groups())
    throw Error(ErrorCode::BadQ,
                "coverage target must lie in [0, " +
                    std::to_string(inst.num_groups()) + "], got " +
                    std::to_string(q));

  h.group_select_var.resize(static_cast<size_t>(inst.num_groups()));
  SparseRow quota;
  for (int i = 0; i < inst.num_groups(); ++i) {
    int z = h.model.add_variable("z_" + std::to_string(i), 0.0, 1.0, true);
    h.group_select_var[static_cast<size_t>(i)] = z;
    quota.push_back({z, 1.0});

    // Coverage becomes conditional: selected entering edges >= z_i.
    const LinearConstraint &old_row =
        h.model.constraint(h.coverage_row[static_cast<size_t>(i)]);
    SparseRow row = old_row.row;
    row.push_back({z, -1.0});
    h.model.replace_constraint(h.coverage_row[static_cast<size_t>(i)],
                               std::move(row), Sense::GreaterEqual, 0.0);
  }
  h.model.add_constraint(std::move(quota), Sense::GreaterEqual,
                         static_cast<double>(q));
  h.partial_q = q;
  return h;
}

} // namespace gip
