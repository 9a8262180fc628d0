/**
 * @file json_io.hpp
 * @brief JSON file formats: instances (with optional coverage), tour files,
 *        and final solver reports.
 */

#ifndef GIP_JSON_IO_HPP
#define GIP_JSON_IO_HPP

#include <optional>
#include <string>

#include "gip/instance.hpp"
#include "gip/solver.hpp"

namespace gip {

struct LoadedInstance {
  GipInstance instance;
  std::optional<CoverageMap> coverage;
};

/**
 * @brief Read an instance file.
 *
 * Accepts `groups`, `coverage`, or both; with both present the groups must
 * equal the inverted coverage, otherwise the file is rejected.
 */
LoadedInstance load_instance(const std::string &path);

void save_instance(const std::string &path, const GipInstance &inst,
                   const CoverageMap *coverage = nullptr);

/// Tour files store edge endpoint pairs: {"edges": [[u,v], ...]}.
void save_tour(const std::string &path, const GipInstance &inst,
               const Tour &tour);
Tour load_tour(const std::string &path, const GipInstance &inst);

/// Final report JSON: ub, lb, gap_pct, termination, wall_s.
std::string report_to_json(const SolverReport &report);
void save_report(const std::string &path, const SolverReport &report);

} // namespace gip

#endif // GIP_JSON_IO_HPP
