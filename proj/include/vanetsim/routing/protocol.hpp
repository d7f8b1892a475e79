#pragma once

#include <cstdint>
#include <optional>

#include "vanetsim/core/engine.hpp"
#include "vanetsim/routing/messages.hpp"
#include "vanetsim/routing/table.hpp"

namespace vanetsim {

// Services the surrounding simulation provides to a protocol instance.  Unit
// tests substitute a mock host, so the three state machines are exercised
// without a radio underneath.
class ProtocolHost {
 public:
  virtual ~ProtocolHost() = default;

  // Queue a control message for transmission; kBroadcastId floods one hop.
  virtual void send_control(const ControlMessage& msg, NodeId mac_dst) = 0;

  // Request a timer callback at `at`; `kind` and `aux` round-trip unchanged.
  virtual void schedule_timer(SimTime at, std::uint32_t kind, std::uint32_t aux) = 0;

  // Data packets parked while DYMO discovers a route.
  virtual void flush_pending(NodeId dest) = 0;
  virtual void drop_pending(NodeId dest) = 0;
};

// Verdict for one data packet asking to leave a node.
struct RouteAction {
  enum Kind { SendTo, Queued, NoRoute } kind;
  NodeId next_hop = 0;  // meaningful for SendTo only
};

class RoutingProtocol {
 public:
  virtual ~RoutingProtocol() = default;

  // Called once before the run; schedules the initial timers.
  virtual void start(SimTime now) = 0;

  virtual void handle_control(const ControlMessage& msg, NodeId from, SimTime now) = 0;
  virtual void handle_timer(std::uint32_t kind, std::uint32_t aux, SimTime now) = 0;

  // Link-layer feedback: retry limit exceeded toward `neighbor`.
  virtual void handle_link_break(NodeId neighbor, SimTime now) = 0;

  // Routing decision for a data packet bound for `dest` (self excluded).
  virtual RouteAction route_data(NodeId dest, SimTime now) = 0;

  // Plain table query; nullopt when no usable route exists.
  virtual std::optional<NodeId> route_lookup(NodeId dest, SimTime now) = 0;

  // Snapshot of the table for diagnostics and the debug dump.
  virtual RouteTable table_snapshot(SimTime now) = 0;

  // A data packet in transit had no usable route here.  Reactive protocols
  // answer with an error broadcast; proactive ones ignore it.
  virtual void notify_forward_failure(NodeId dest, SimTime now) {
    (void)dest;
    (void)now;
  }
};

}  // namespace vanetsim
