/**
 * @file simulator.hpp
 * @brief Planar point-robot instance generator: maze workspace with
 *        L-shaped obstacles, RRG roadmap over position and heading, and
 *        field-of-view visibility sets.
 */

#ifndef GIP_SIMULATOR_HPP
#define GIP_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gip/instance.hpp"

namespace gip {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Rect {
  double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;
  bool contains(Point p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

/// Two axis-aligned rectangles sharing a corner.
struct LObstacle {
  Rect a;
  Rect b;
};

/// Planar position plus heading in radians.
struct Config {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

struct Workspace {
  Rect bounds;
  std::vector<LObstacle> obstacles;
  std::vector<Point> pois;
  Config start;
};

struct SensorModel {
  double fov_half_angle = 0.0; // radians, in (0, pi]
  double range = 0.0;          // length units, positive
};

/// Positional weight of one radian of heading change in the configuration
/// metric; any positive value keeps distinct configurations apart.
constexpr double kHeadingWeight = 0.5;

bool point_in_free_space(const Workspace &ws, Point p);
bool segment_hits_obstacles(const Workspace &ws, Point a, Point b);
double config_distance(const Config &a, const Config &b);

/// Rejection-sample a free-space point; throws PlacementFailure after
/// `max_attempts` rejected draws.
Point sample_free_point(const Rect &bounds,
                        const std::vector<LObstacle> &obstacles,
                        std::uint64_t &rng_state, int max_attempts = 10000);

Workspace generate_workspace(std::uint64_t seed, Rect bounds,
                             int obstacle_count, int poi_count);

struct Roadmap {
  std::vector<Config> configs; // vertex 0 is the start configuration
  std::vector<Edge> edges;     // both directions of every connection
};

Roadmap build_rrg(const Workspace &ws, int n, double step,
                  double neighbor_radius, std::uint64_t seed);

/// POI ids visible from a configuration: within range, within the field of
/// view, and on an unobstructed line of sight.
std::vector<int> visibility(const Workspace &ws, const SensorModel &sensor,
                            const Config &config);

struct EmittedInstance {
  GipInstance instance;
  CoverageMap coverage;
};

EmittedInstance emit_instance(const Workspace &ws, const Roadmap &roadmap,
                              const SensorModel &sensor);

/// Sidecar geometry file for visualization (bounds, obstacles, POIs, start,
/// sensor), written next to the instance JSON.
void save_geometry(const std::string &path, const Workspace &ws,
                   const SensorModel &sensor);

} // namespace gip

#endif // GIP_SIMULATOR_HPP
