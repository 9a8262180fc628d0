/**
 * @file plot.hpp
 * @brief Bound-vs-time chart rendering from anytime CSV logs.
 */

#ifndef GIP_PLOT_HPP
#define GIP_PLOT_HPP

#include <string>
#include <vector>

namespace gip {

struct CsvLogRow {
  double elapsed_s = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double gap_pct = 0.0;
  std::string event;
};

/// Parse a record_bounds CSV log; throws ParseError on malformed input or a
/// log with no data rows.
std::vector<CsvLogRow> parse_bounds_csv(const std::string &path);

/// Render upper/lower bound series against elapsed time as an SVG line
/// chart with a final-gap annotation; output is deterministic.
void render_bounds_svg(const std::vector<CsvLogRow> &rows,
                       const std::string &out_path);

} // namespace gip

#endif // GIP_PLOT_HPP
