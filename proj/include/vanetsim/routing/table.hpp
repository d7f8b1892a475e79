#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <ostream>

#include "vanetsim/core/engine.hpp"
#include "vanetsim/routing/messages.hpp"

namespace vanetsim {

inline constexpr SimTime kNeverExpires = std::numeric_limits<SimTime>::infinity();

struct RouteEntry {
  NodeId dest = 0;
  NodeId next_hop = 0;
  std::uint32_t metric = 0;  // hop count; kInfiniteMetric = unreachable
  std::uint32_t seq_num = 0;
  SimTime installed_at = 0.0;
  SimTime expires_at = kNeverExpires;
  bool valid = true;

  bool usable(SimTime now) const {
    return valid && metric < kInfiniteMetric && now <= expires_at;
  }
};

using RouteTable = std::map<NodeId, RouteEntry>;

// One entry per line: dest, next_hop, metric, seq, expires_at.
inline void dump_table(const RouteTable& table, std::ostream& os) {
  for (const auto& [dest, e] : table) {
    os << dest << ' ' << e.next_hop << ' ' << e.metric << ' ' << e.seq_num << ' ';
    if (e.expires_at == kNeverExpires)
      os << '-';
    else
      os << e.expires_at;
    if (!e.valid) os << " (invalid)";
    os << '\n';
  }
}

}  // namespace vanetsim
