#pragma once

#include <cstdint>
#include <memory>
#include <variant>

#include "vanetsim/core/engine.hpp"
#include "vanetsim/routing/messages.hpp"

namespace vanetsim {

enum class FrameKind : std::uint8_t { Data, RoutingControl, Ack };

// One hop of a CBR payload.  sent_at is the application send time at the
// origin and rides along unchanged for the end-to-end delay bookkeeping.
struct DataBody {
  std::uint64_t packet_id = 0;
  std::uint32_t flow_id = 0;
  NodeId origin = 0;
  NodeId final_dst = 0;
  std::uint32_t ttl = 0;
  SimTime sent_at = 0.0;
};

struct Frame {
  FrameKind kind = FrameKind::Data;
  NodeId src = 0;
  NodeId dst = kBroadcastId;  // kBroadcastId for broadcast
  std::uint32_t payload_bytes = 0;
  SimTime born_at = 0.0;  // when this hop enqueued the frame
  std::variant<DataBody, ControlMessage> body;

  bool is_broadcast() const { return dst == kBroadcastId; }
  const DataBody& data() const { return std::get<DataBody>(body); }
  const ControlMessage& control() const { return std::get<ControlMessage>(body); }
};

using FramePtr = std::shared_ptr<const Frame>;

}  // namespace vanetsim
