#include "gip/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gip/errors.hpp"

namespace gip {

std::vector<CsvLogRow> parse_bounds_csv(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::string line;
  if (!std::getline(is, line) || line != "elapsed_s,ub,lb,gap_pct,event")
    throw Error(ErrorCode::ParseError, "missing or wrong CSV header in " + path);

  auto parse_number = [&](const std::string &tok) {
    if (tok == "inf")
      return std::numeric_limits<double>::infinity();
    if (tok == "-inf")
      return -std::numeric_limits<double>::infinity();
    if (tok == "nan" || tok == "-nan")
      return std::numeric_limits<double>::quiet_NaN();
    size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size())
      throw Error(ErrorCode::ParseError, "bad number in CSV: " + tok);
    return v;
  };

  std::vector<CsvLogRow> rows;
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ','))
      fields.push_back(field);
    if (fields.size() != 5)
      throw Error(ErrorCode::ParseError, "CSV row needs 5 fields: " + line);
    CsvLogRow row;
    row.elapsed_s = parse_number(fields[0]);
    row.upper = parse_number(fields[1]);
    row.lower = parse_number(fields[2]);
    row.gap_pct = parse_number(fields[3]);
    row.event = fields[4];
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw Error(ErrorCode::ParseError, "CSV log has no data rows");
  return rows;
}

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

} // namespace

void render_bounds_svg(const std::vector<CsvLogRow> &rows,
                       const std::string &out_path) {
  const double width = 640, height = 400;
  const double ml = 70, mr = 20, mt = 30, mb = 50;

  double tmax = 0.0, vmin = 0.0, vmax = 1.0;
  bool have_value = false;
  for (const CsvLogRow &r : rows) {
    tmax = std::max(tmax, r.elapsed_s);
    for (double v : {r.upper, r.lower}) {
      if (!std::isfinite(v))
        continue;
      if (!have_value) {
        vmin = vmax = v;
        have_value = true;
      } else {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
    }
  }
  if (tmax <= 0.0)
    tmax = 1.0;
  if (!have_value)
    vmax = vmin + 1.0;
  if (vmax - vmin < 1e-12) {
    vmin -= 0.5;
    vmax += 0.5;
  }

  auto sx = [&](double t) { return ml + (width - ml - mr) * (t / tmax); };
  auto sy = [&](double v) {
    return height - mb - (height - mt - mb) * ((v - vmin) / (vmax - vmin));
  };

  auto polyline = [&](double CsvLogRow::*field) {
    std::string pts;
    for (const CsvLogRow &r : rows) {
      double v = r.*field;
      if (!std::isfinite(v))
        continue;
      pts += fmt(sx(r.elapsed_s)) + "," + fmt(sy(v)) + " ";
    }
    return pts;
  };

  std::ofstream os(out_path);
  if (!os)
    throw Error(ErrorCode::ParseError, "cannot open " + out_path + " for writing");

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
     << height << "\">\n";
  os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes
  os << "  <line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
     << width - mr << "\" y2=\"" << height - mb
     << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << height - mb << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double t = tmax * i / 4.0;
    double v = vmin + (vmax - vmin) * i / 4.0;
    os << "  <text x=\"" << fmt(sx(t)) << "\" y=\"" << height - mb + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    os << "  <text x=\"" << ml - 8 << "\" y=\"" << fmt(sy(v) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }
  os << "  <text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
     << "\" font-size=\"12\" text-anchor=\"middle\">elapsed seconds</text>\n";

  os << "  <polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\""
     << polyline(&CsvLogRow::upper) << "\"/>\n";
  os << "  <polyline fill=\"none\" stroke=\"#2471a3\" stroke-width=\"1.5\" points=\""
     << polyline(&CsvLogRow::lower) << "\"/>\n";

  os << "  <text x=\"" << width - mr - 4 << "\" y=\"" << mt + 4
     << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#c0392b\">upper bound</text>\n";
  os << "  <text x=\"" << width - mr - 4 << "\" y=\"" << mt + 20
     << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#2471a3\">lower bound</text>\n";

  const CsvLogRow &last = rows.back();
  std::string gap_text = std::isfinite(last.gap_pct)
                             ? "final gap " + fmt(last.gap_pct) + "%"
                             : "final gap n/a";
  os << "  <text x=\"" << width - mr - 4 << "\" y=\"" << mt + 36
     << "\" font-size=\"12\" text-anchor=\"end\">" << gap_text << "</text>\n";
  os << "</svg>\n";
}

} // namespace gip
