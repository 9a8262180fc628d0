#include "gip/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace gip {

namespace {

constexpr double kPi = 3.14159265358979323846;

// splitmix64: portable, seedable, and independent of library internals, so
// generated instances are bit-identical everywhere.
std::uint64_t next_u64(std::uint64_t &state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double next_unit(std::uint64_t &state) {
  return static_cast<double>(next_u64(state) >> 11) * 0x1.0p-53;
}

double next_in(std::uint64_t &state, double lo, double hi) {
  return lo + (hi - lo) * next_unit(state);
}

double wrap_angle(double a) {
  while (a > kPi)
    a -= 2.0 * kPi;
  while (a <= -kPi)
    a += 2.0 * kPi;
  return a;
}

bool segment_hits_rect(Point a, Point b, const Rect &r) {
  // Liang-Barsky clipping of the parametric segment against the slab.
  double dx = b.x - a.x;
  double dy = b.y - a.y;
  double t0 = 0.0, t1 = 1.0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - r.xmin, r.xmax - a.x, a.y - r.ymin, r.ymax - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0)
        return false; // parallel and outside
    } else {
      double t = q[i] / p[i];
      if (p[i] < 0.0)
        t0 = std::max(t0, t);
      else
        t1 = std::min(t1, t);
      if (t0 > t1)
        return false;
    }
  }
  return true;
}

} // namespace

bool point_in_free_space(const Workspace &ws, Point p) {
  if (!ws.bounds.contains(p))
    return false;
  for (const LObstacle &obs : ws.obstacles)
    if (obs.a.contains(p) || obs.b.contains(p))
      return false;
  return true;
}

bool segment_hits_obstacles(const Workspace &ws, Point a, Point b) {
  for (const LObstacle &obs : ws.obstacles)
    if (segment_hits_rect(a, b, obs.a) || segment_hits_rect(a, b, obs.b))
      return true;
  return false;
}

double config_distance(const Config &a, const Config &b) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  double da = std::abs(wrap_angle(a.heading - b.heading));
  return std::sqrt(dx * dx + dy * dy) + kHeadingWeight * da;
}

Point sample_free_point(const Rect &bounds,
                        const std::vector<LObstacle> &obstacles,
                        std::uint64_t &rng_state, int max_attempts) {
  Workspace probe;
  probe.bounds = bounds;
  probe.obstacles = obstacles;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Point p{next_in(rng_state, bounds.xmin, bounds.xmax),
            next_in(rng_state, bounds.ymin, bounds.ymax)};
    if (point_in_free_space(probe, p))
      return p;
  }
  throw Error(ErrorCode::PlacementFailure,
              "no free-space point found after " +
                  std::to_string(max_attempts) + " attempts");
}

Workspace generate_workspace(std::uint64_t seed, Rect bounds,
                             int obstacle_count, int poi_count) {
  if (obstacle_count < 0 || poi_count < 0)
    throw Error(ErrorCode::OutOfRange, "counts must be nonnegative");
  std::uint64_t state = seed ^ 0xa02bdbf7bb3c0a7ull;

  Workspace ws;
  ws.bounds = bounds;
  const double w = bounds.xmax - bounds.xmin;
  const double h = bounds.ymax - bounds.ymin;
  const double unit = std::min(w, h);
  for (int i = 0; i < obstacle_count; ++i) {
    double cx = next_in(state, bounds.xmin + 0.05 * w, bounds.xmax - 0.05 * w);
    double cy = next_in(state, bounds.ymin + 0.05 * h, bounds.ymax - 0.05 * h);
    double arm_a = next_in(state, 0.08, 0.25) * unit;
    double arm_b = next_in(state, 0.08, 0.25) * unit;
    double thick = next_in(state, 0.03, 0.08) * unit;
    double sx = next_unit(state) < 0.5 ? -1.0 : 1.0;
    double sy = next_unit(state) < 0.5 ? -1.0 : 1.0;

    auto clipped = [&](double x0, double y0, double x1, double y1) {
      Rect r{std::min(x0, x1), std::min(y0, y1), std::max(x0, x1),
             std::max(y0, y1)};
      r.xmin = std::max(r.xmin, bounds.xmin);
      r.ymin = std::max(r.ymin, bounds.ymin);
      r.xmax = std::min(r.xmax, bounds.xmax);
      r.ymax = std::min(r.ymax, bounds.ymax);
      return r;
    };
    LObstacle obs;
    obs.a = clipped(cx, cy, cx + sx * arm_a, cy + sy * thick);
    obs.b = clipped(cx, cy, cx + sx * thick, cy + sy * arm_b);
    ws.obstacles.push_back(obs);
  }

  for (int i = 0; i < poi_count; ++i)
    ws.pois.push_back(sample_free_point(bounds, ws.obstacles, state));
  Point start = sample_free_point(bounds, ws.obstacles, state);
  ws.start = {start.x, start.y, next_in(state, 0.0, 2.0 * kPi)};
  return ws;
}

Roadmap build_rrg(const Workspace &ws, int n, double step,
                  double neighbor_radius, std::uint64_t seed) {
  if (n < 1)
    throw Error(ErrorCode::OutOfRange, "roadmap needs at least one vertex");
  if (step <= 0.0 || neighbor_radius <= 0.0)
    throw Error(ErrorCode::OutOfRange, "step and radius must be positive");

  std::uint64_t state = seed ^ 0x51b5c19e03490f1dull;
  Roadmap rm;
  rm.configs.push_back(ws.start);

  long attempts = 0;
  const long attempt_cap = 1000L * n + 100000L;
  while (static_cast<int>(rm.configs.size()) < n && attempts < attempt_cap) {
    ++attempts;
    Config sample{next_in(state, ws.bounds.xmin, ws.bounds.xmax),
                  next_in(state, ws.bounds.ymin, ws.bounds.ymax),
                  next_in(state, 0.0, 2.0 * kPi)};

    int nearest = 0;
    double nearest_d = config_distance(rm.configs[0], sample);
    for (size_t j = 1; j < rm.configs.size(); ++j) {
      double d = config_distance(rm.configs[j], sample);
      if (d < nearest_d) {
        nearest_d = d;
        nearest = static_cast<int>(j);
      }
    }
    if (nearest_d < 1e-12)
      continue; // duplicate configuration

    Config grown = sample;
    if (nearest_d > step) {
      double frac = step / nearest_d;
      const Config &from = rm.configs[static_cast<size_t>(nearest)];
      grown.x = from.x + frac * (sample.x - from.x);
      grown.y = from.y + frac * (sample.y - from.y);
      grown.heading = wrap_angle(
          from.heading + frac * wrap_angle(sample.heading - from.heading));
    }
    Point pos{grown.x, grown.y};
    if (!point_in_free_space(ws, pos))
      continue;
    const Config &near_cfg = rm.configs[static_cast<size_t>(nearest)];
    if (segment_hits_obstacles(ws, {near_cfg.x, near_cfg.y}, pos))
      continue;

    int new_id = static_cast<int>(rm.configs.size());
    rm.configs.push_back(grown);
    for (int j = 0; j < new_id; ++j) {
      const Config &other = rm.configs[static_cast<size_t>(j)];
      double d = config_distance(other, grown);
      if (d > neighbor_radius || d < 1e-12)
        continue;
      if (segment_hits_obstacles(ws, {other.x, other.y}, pos))
        continue;
      rm.edges.push_back({j, new_id, d});
      rm.edges.push_back({new_id, j, d});
    }
  }
  return rm;
}

std::vector<int> visibility(const Workspace &ws, const SensorModel &sensor,
                            const Config &config) {
  std::vector<int> seen;
  for (int p = 0; p < static_cast<int>(ws.pois.size()); ++p) {
    const Point &poi = ws.pois[static_cast<size_t>(p)];
    double dx = poi.x - config.x;
    double dy = poi.y - config.y;
    if (std::sqrt(dx * dx + dy * dy) > sensor.range)
      continue;
    double bearing = std::atan2(dy, dx);
    if (std::abs(wrap_angle(bearing - config.heading)) > sensor.fov_half_angle)
      continue;
    if (segment_hits_obstacles(ws, {config.x, config.y}, poi))
      continue;
    seen.push_back(p);
  }
  return seen;
}

EmittedInstance emit_instance(const Workspace &ws, const Roadmap &roadmap,
                              const SensorModel &sensor) {
  if (roadmap.configs.empty())
    throw Error(ErrorCode::OutOfRange, "roadmap is empty");
  CoverageMap coverage;
  coverage.poi_count = static_cast<int>(ws.pois.size());
  coverage.by_vertex.reserve(roadmap.configs.size());
  for (const Config &cfg : roadmap.configs)
    coverage.by_vertex.push_back(visibility(ws, sensor, cfg));

  std::vector<std::vector<VertexId>> groups = invert_coverage(coverage);
  GipInstance inst(static_cast<int>(roadmap.configs.size()), roadmap.edges, 0,
                   std::move(groups));
  return EmittedInstance{std::move(inst), std::move(coverage)};
}

void save_geometry(const std::string &path, const Workspace &ws,
                   const SensorModel &sensor) {
  nlohmann::ordered_json j;
  j["bounds"] = {ws.bounds.xmin, ws.bounds.ymin, ws.bounds.xmax, ws.bounds.ymax};
  nlohmann::ordered_json obstacles = nlohmann::ordered_json::array();
  for (const LObstacle &obs : ws.obstacles) {
    obstacles.push_back(
        {{"a", {obs.a.xmin, obs.a.ymin, obs.a.xmax, obs.a.ymax}},
         {"b", {obs.b.xmin, obs.b.ymin, obs.b.xmax, obs.b.ymax}}});
  }
  j["obstacles"] = std::move(obstacles);
  nlohmann::ordered_json pois = nlohmann::ordered_json::array();
  for (const Point &p : ws.pois)
    pois.push_back({p.x, p.y});
  j["pois"] = std::move(pois);
  j["start"] = {ws.start.x, ws.start.y, ws.start.heading};
  j["sensor"] = {{"fov_half_angle", sensor.fov_half_angle},
                 {"range", sensor.range}};
  std::ofstream os(path);
  if (!os)
    throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  os << j.dump(2) << "\n";
}

} // namespace gip
