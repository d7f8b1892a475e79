#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "vanetsim/core/engine.hpp"
#include "vanetsim/core/errors.hpp"
#include "vanetsim/core/rng.hpp"

namespace vanetsim {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

// Four-lane bidirectional strip.  Lanes in the lower half head +x, the upper
// half -x, so with an even lane count exactly half the traffic moves each
// way.  With wraparound enabled the strip is a ring and node density stays
// constant over the whole run.
struct HighwayConfig {
  double length_m = 1000.0;
  std::uint32_t lanes = 4;
  double lane_width_m = 5.0;
  bool wraparound = true;

  void validate() const {
    if (!(length_m > 0.0)) throw InvalidConfig("highway: length must be > 0");
    if (lanes < 1) throw InvalidConfig("highway: need at least one lane");
    if (!(lane_width_m > 0.0)) throw InvalidConfig("highway: lane width must be > 0");
  }

  int heading_for_lane(std::uint32_t lane) const {
    return lane < lanes - lanes / 2 ? +1 : -1;
  }

  double lane_center_y(std::uint32_t lane) const {
    return (static_cast<double>(lane) + 0.5) * lane_width_m;
  }
};

struct NodeKinematics {
  NodeId node_id = 0;
  Position position;
  std::uint32_t lane_index = 0;
  double speed_mps = 0.0;
  int heading = +1;  // +1 along +x, -1 along -x
};

// Plain Euclidean distance between two positions.
inline double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Distance as the radio sees it: on a wraparound strip the x axis is a ring,
// so two nodes near opposite ends are neighbors.
inline double ring_distance(const Position& a, const Position& b,
                            const HighwayConfig& cfg) {
  double dx = std::fabs(a.x - b.x);
  if (cfg.wraparound) dx = std::min(dx, cfg.length_m - dx);
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Places n nodes round-robin across lanes, each at a uniform random x, all at
// the same constant speed with the lane's heading.
inline std::vector<NodeKinematics> build_highway(const HighwayConfig& cfg,
                                                 std::uint32_t n_nodes,
                                                 double speed_mps,
                                                 RngStream& rng) {
  cfg.validate();
  if (n_nodes < 2) throw InvalidConfig("build_highway: need at least 2 nodes");
  if (speed_mps < 0.0) throw InvalidConfig("build_highway: speed must be >= 0");
  std::vector<NodeKinematics> nodes;
  nodes.reserve(n_nodes);
  for (std::uint32_t i = 0; i < n_nodes; ++i) {
    const std::uint32_t lane = i % cfg.lanes;
    NodeKinematics k;
    k.node_id = i;
    k.lane_index = lane;
    k.position = {rng.uniform(0.0, cfg.length_m), cfg.lane_center_y(lane)};
    k.speed_mps = speed_mps;
    k.heading = cfg.heading_for_lane(lane);
    nodes.push_back(k);
  }
  return nodes;
}

inline double wrap_coordinate(double x, double length) {
  x = std::fmod(x, length);
  if (x < 0.0) x += length;
  return x;
}

// Constant-velocity step; x wraps modulo the strip length when wraparound is
// enabled, otherwise the node keeps going (the caller decides what off-strip
// means).
inline NodeKinematics step_kinematics(const NodeKinematics& node, double dt,
                                      const HighwayConfig& cfg) {
  if (!(dt > 0.0)) throw InvalidParams("step_kinematics: dt must be > 0");
  NodeKinematics next = node;
  double x = node.position.x + node.heading * node.speed_mps * dt;
  if (cfg.wraparound) x = wrap_coordinate(x, cfg.length_m);
  next.position.x = x;
  return next;
}

// Closed-form position at absolute time t for a node created at t = 0.
// Identical to iterating step_kinematics since speeds are constant.
inline Position position_at(const NodeKinematics& node, double t,
                            const HighwayConfig& cfg) {
  double x = node.position.x + node.heading * node.speed_mps * t;
  if (cfg.wraparound) x = wrap_coordinate(x, cfg.length_m);
  return {x, node.position.y};
}

}  // namespace vanetsim
