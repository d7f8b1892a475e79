#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "vanetsim/core/engine.hpp"

namespace vanetsim {

// Routing-plane message bodies.  Sizes are modeled, not serialized: each body
// maps to a byte count via control_payload_bytes so airtime and overhead are
// realistic.

enum class MsgKind { DsdvUpdate, Hello, Tc, Rreq, Rrep, Rerr };

inline const char* to_string(MsgKind k) {
  switch (k) {
    case MsgKind::DsdvUpdate: return "DSDV_UPDATE";
    case MsgKind::Hello: return "HELLO";
    case MsgKind::Tc: return "TC";
    case MsgKind::Rreq: return "RREQ";
    case MsgKind::Rrep: return "RREP";
    case MsgKind::Rerr: return "RERR";
  }
  return "?";
}

inline constexpr std::uint32_t kInfiniteMetric = 0xFFFF;

struct DsdvAdvert {
  NodeId dest;
  std::uint32_t seq;     // even = alive, odd = broken
  std::uint32_t metric;  // kInfiniteMetric marks a broken route
};

struct DsdvUpdateBody {
  std::vector<DsdvAdvert> entries;
  bool full_dump = false;
};

enum class LinkStatus : std::uint8_t { Heard, Symmetric, Mpr };

struct HelloNeighbor {
  NodeId id;
  LinkStatus status;
};

struct HelloBody {
  std::vector<HelloNeighbor> neighbors;
};

struct TcBody {
  std::vector<NodeId> advertised;  // the origin's MPR selectors
  std::uint32_t ansn;
  std::uint32_t msg_seq;  // per-origin flood id for duplicate suppression
};

struct RreqBody {
  NodeId orig;
  NodeId target;
  std::uint32_t orig_seq;
  std::uint32_t hop_limit;
  std::uint32_t hop_count;
};

struct RrepBody {
  NodeId orig;    // the node answering (the route target)
  NodeId target;  // the node that asked
  std::uint32_t orig_seq;
  std::uint32_t hop_count;
};

struct RerrEntry {
  NodeId dest;
  std::uint32_t seq;
};

struct RerrBody {
  std::vector<RerrEntry> unreachable;
};

struct ControlMessage {
  std::variant<DsdvUpdateBody, HelloBody, TcBody, RreqBody, RrepBody, RerrBody> body;
  NodeId origin = 0;
  SimTime emitted_at = 0.0;

  MsgKind kind() const {
    return static_cast<MsgKind>(body.index());
  }
};

// Modeled wire size of a control message, loosely following the respective
// packet formats: fixed header plus a few bytes per carried tuple.
inline std::uint32_t control_payload_bytes(const ControlMessage& msg) {
  struct Sizer {
    std::uint32_t operator()(const DsdvUpdateBody& b) const {
      return 12 + 12 * static_cast<std::uint32_t>(b.entries.size());
    }
    std::uint32_t operator()(const HelloBody& b) const {
      return 16 + 5 * static_cast<std::uint32_t>(b.neighbors.size());
    }
    std::uint32_t operator()(const TcBody& b) const {
      return 16 + 4 * static_cast<std::uint32_t>(b.advertised.size());
    }
    std::uint32_t operator()(const RreqBody&) const { return 24; }
    std::uint32_t operator()(const RrepBody&) const { return 20; }
    std::uint32_t operator()(const RerrBody& b) const {
      return 12 + 8 * static_cast<std::uint32_t>(b.unreachable.size());
    }
  };
  return std::visit(Sizer{}, msg.body);
}

}  // namespace vanetsim
