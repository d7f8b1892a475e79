#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "vanetsim/core/engine.hpp"
#include "vanetsim/core/errors.hpp"
#include "vanetsim/core/rng.hpp"

namespace vanetsim {

// One constant-bit-rate flow: fixed-size packets every interval from start
// until (exclusive) stop.
struct CbrFlowConfig {
  std::uint32_t flow_id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  double start_s = 0.0;
  double stop_s = 0.0;
  double interval_s = 0.03;
  std::uint32_t payload_bytes = 512;

  void validate() const {
    if (src == dst) throw InvalidConfig("cbr: src and dst must differ");
    if (!(interval_s > 0.0)) throw InvalidConfig("cbr: interval must be > 0");
    if (!(stop_s >= start_s)) throw InvalidConfig("cbr: stop before start");
    if (payload_bytes == 0) throw InvalidConfig("cbr: empty payload");
  }
};

// Number of packets the flow emits.  The epsilon keeps an exact multiple of
// the interval from gaining or losing a packet to rounding.
inline std::uint64_t cbr_send_count(double start_s, double stop_s,
                                    double interval_s) {
  if (!(interval_s > 0.0)) throw InvalidConfig("cbr: interval must be > 0");
  const double span = stop_s - start_s;
  if (span <= 0.0) return 0;
  return static_cast<std::uint64_t>(std::ceil(span / interval_s - 1e-9));
}

// Send instants, computed multiplicatively so error does not accumulate.
inline std::vector<double> cbr_send_times(const CbrFlowConfig& cfg) {
  cfg.validate();
  const std::uint64_t n = cbr_send_count(cfg.start_s, cfg.stop_s, cfg.interval_s);
  std::vector<double> times;
  times.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k)
    times.push_back(cfg.start_s + static_cast<double>(k) * cfg.interval_s);
  return times;
}

// Distinct source/destination pairs for the requested number of flows; a
// source is reused only once all nodes have been tried.
inline std::vector<std::pair<NodeId, NodeId>> pick_flow_pairs(
    std::uint32_t n_nodes, std::uint32_t n_flows, RngStream& rng) {
  if (n_nodes < 2) throw InvalidConfig("flows need at least two nodes");
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(n_flows);
  std::vector<NodeId> order(n_nodes);
  for (NodeId i = 0; i < n_nodes; ++i) order[i] = i;
  // Fisher-Yates over the source order so low ids are not always sources.
  for (std::uint32_t i = n_nodes - 1; i > 0; --i) {
    const std::uint32_t j = rng.uniform_int(0, i);
    std::swap(order[i], order[j]);
  }
  for (std::uint32_t f = 0; f < n_flows; ++f) {
    const NodeId src = order[f % n_nodes];
    NodeId dst = src;
    while (dst == src) dst = rng.uniform_int(0, n_nodes - 1);
    pairs.emplace_back(src, dst);
  }
  return pairs;
}

}  // namespace vanetsim
