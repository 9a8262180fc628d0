#include "gip/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace gip {

using nlohmann::ordered_json;

namespace {

ordered_json read_json_file(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw Error(ErrorCode::ParseError, "cannot open " + path);
  ordered_json j;
  try {
    is >> j;
  } catch (const std::exception &ex) {
    throw Error(ErrorCode::ParseError,
                "malformed JSON in " + path + ": " + ex.what());
  }
  return j;
}

void write_json_file(const std::string &path, const ordered_json &j) {
  std::ofstream os(path);
  if (!os)
    throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  os << j.dump(2) << "\n";
}

} // namespace

LoadedInstance load_instance(const std::string &path) {
  ordered_json j = read_json_file(path);
  try {
    int num_vertices = j.at("num_vertices").get<int>();
    VertexId root = j.at("root").get<VertexId>();
    std::vector<Edge> edges;
    for (const auto &e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3)
        throw Error(ErrorCode::ParseError, "edge entries are [tail, head, cost]");
      edges.push_back({e[0].get<VertexId>(), e[1].get<VertexId>(),
                       e[2].get<double>()});
    }

    std::optional<CoverageMap> coverage;
    if (j.contains("coverage")) {
      CoverageMap cov;
      cov.poi_count = j["coverage"].at("poi_count").get<int>();
      for (const auto &per_vertex : j["coverage"].at("by_vertex"))
        cov.by_vertex.push_back(per_vertex.get<std::vector<int>>());
      if (static_cast<int>(cov.by_vertex.size()) != num_vertices)
        throw Error(ErrorCode::ParseError,
                    "coverage must list every vertex exactly once");
      coverage = std::move(cov);
    }

    std::vector<std::vector<VertexId>> groups;
    if (j.contains("groups")) {
      for (const auto &g : j["groups"]) {
        std::vector<VertexId> group = g.get<std::vector<VertexId>>();
        std::sort(group.begin(), group.end());
        groups.push_back(std::move(group));
      }
      if (coverage) {
        std::vector<std::vector<VertexId>> inverted = invert_coverage(*coverage);
        if (inverted != groups)
          throw Error(ErrorCode::ParseError,
                      "groups do not match the inverted coverage map");
      }
    } else if (coverage) {
      groups = invert_coverage(*coverage);
    } else {
      throw Error(ErrorCode::ParseError,
                  "instance needs either groups or coverage");
    }

    return LoadedInstance{GipInstance(num_vertices, std::move(edges), root,
                                      std::move(groups)),
                          std::move(coverage)};
  } catch (const ordered_json::exception &ex) {
    throw Error(ErrorCode::ParseError,
                "malformed instance file " + path + ": " + ex.what());
  }
}

void save_instance(const std::string &path, const GipInstance &inst,
                   const CoverageMap *coverage) {
  ordered_json j;
  j["num_vertices"] = inst.num_vertices();
  j["root"] = inst.root();
  ordered_json edges = ordered_json::array();
  for (const Edge &e : inst.edges())
    edges.push_back({e.tail, e.head, e.cost});
  j["edges"] = std::move(edges);
  ordered_json groups = ordered_json::array();
  for (const auto &g : inst.groups()) {
    std::vector<VertexId> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    groups.push_back(sorted);
  }
  j["groups"] = std::move(groups);
  if (coverage) {
    ordered_json cov;
    cov["poi_count"] = coverage->poi_count;
    cov["by_vertex"] = coverage->by_vertex;
    j["coverage"] = std::move(cov);
  }
  write_json_file(path, j);
}

void save_tour(const std::string &path, const GipInstance &inst,
               const Tour &tour) {
  ordered_json j;
  ordered_json edges = ordered_json::array();
  for (EdgeId e : tour.edges)
    edges.push_back({inst.edge(e).tail, inst.edge(e).head});
  j["edges"] = std::move(edges);
  write_json_file(path, j);
}

Tour load_tour(const std::string &path, const GipInstance &inst) {
  ordered_json j = read_json_file(path);
  Tour tour;
  try {
    for (const auto &e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        throw Error(ErrorCode::ParseError, "tour entries are [tail, head]");
      VertexId tail = e[0].get<VertexId>();
      VertexId head = e[1].get<VertexId>();
      EdgeId id = inst.find_edge(tail, head);
      // Unknown pairs map onto an out-of-range id so verification reports
      // UnknownEdge instead of a parse failure.
      tour.edges.push_back(id >= 0 ? id : inst.num_edges());
    }
  } catch (const ordered_json::exception &ex) {
    throw Error(ErrorCode::ParseError,
                "malformed tour file " + path + ": " + ex.what());
  }
  return tour;
}

namespace {
ordered_json finite_or_string(double v) {
  if (std::isfinite(v))
    return v;
  if (std::isnan(v))
    return "nan";
  return v > 0 ? "inf" : "-inf";
}
} // namespace

std::string report_to_json(const SolverReport &report) {
  ordered_json j;
  j["ub"] = finite_or_string(report.upper_bound);
  j["lb"] = finite_or_string(report.lower_bound);
  j["gap_pct"] = finite_or_string(report.gap_pct);
  j["termination"] = to_string(report.termination);
  j["nodes"] = report.nodes_processed;
  j["cuts"] = report.cuts_added;
  j["wall_s"] = report.wall_seconds;
  return j.dump(2) + "\n";
}

void save_report(const std::string &path, const SolverReport &report) {
  std::ofstream os(path);
  if (!os)
    throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  os << report_to_json(report);
}

} // namespace gip
