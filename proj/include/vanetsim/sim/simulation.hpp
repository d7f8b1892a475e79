#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <variant>
#include <vector>

#include "vanetsim/core/engine.hpp"
#include "vanetsim/core/errors.hpp"
#include "vanetsim/core/rng.hpp"
#include "vanetsim/mac/mac.hpp"
#include "vanetsim/metrics/metrics.hpp"
#include "vanetsim/mobility/highway.hpp"
#include "vanetsim/net/frame.hpp"
#include "vanetsim/phy/phy.hpp"
#include "vanetsim/routing/dsdv.hpp"
#include "vanetsim/routing/dymo.hpp"
#include "vanetsim/routing/olsr.hpp"
#include "vanetsim/routing/presets.hpp"
#include "vanetsim/traffic/cbr.hpp"

namespace vanetsim {

// Everything one run needs.  The 802.11 variant selects matching MAC and PHY
// parameter sets unless explicit overrides are given.
struct SimulationSetup {
  ProtocolName protocol = ProtocolName::DSDV;
  MacKind mac_kind = MacKind::Dot11;
  std::uint32_t n_nodes = 25;
  double speed_mps = 15.0;
  std::uint64_t seed = 1;
  double duration_s = 900.0;
  std::uint32_t n_flows = 10;
  std::uint32_t payload_bytes = 512;
  double cbr_interval_s = 0.03;
  double flow_start_min_s = 5.0;
  double flow_start_max_s = 10.0;
  std::uint32_t data_ttl = 32;
  std::uint32_t queue_capacity = 50;
  std::uint32_t discovery_buffer = 10;
  HighwayConfig highway;

  // When unset, presets matching mac_kind / protocol apply.
  std::optional<PhyParams> phy;
  std::optional<MacParams> mac;
  std::optional<NakagamiParams> nakagami;
  std::optional<ProtocolParams> protocol_params;

  void validate() const {
    if (n_nodes < 2) throw InvalidConfig("need at least two nodes");
    if (!(duration_s > 0.0)) throw InvalidConfig("duration must be > 0");
    if (!(speed_mps >= 0.0)) throw InvalidConfig("speed must be >= 0");
    if (!(cbr_interval_s > 0.0)) throw InvalidConfig("packet interval must be > 0");
    if (payload_bytes == 0) throw InvalidConfig("payload must be > 0 bytes");
    if (!(flow_start_min_s >= 0.0) || flow_start_max_s < flow_start_min_s)
      throw InvalidConfig("flow start window malformed");
    if (data_ttl == 0) throw InvalidConfig("ttl must be >= 1");
    highway.validate();
  }
};

class Simulation;

namespace detail {

// Per-node bridge between a routing agent and the surrounding simulation.
class NodeHost : public ProtocolHost {
 public:
  NodeHost(Simulation& sim, NodeId node) : sim_(sim), node_(node) {}
  void send_control(const ControlMessage& msg, NodeId mac_dst) override;
  void schedule_timer(SimTime at, std::uint32_t kind, std::uint32_t aux) override;
  void flush_pending(NodeId dest) override;
  void drop_pending(NodeId dest) override;

 private:
  Simulation& sim_;
  NodeId node_;
};

}  // namespace detail

class Simulation {
 public:
  explicit Simulation(SimulationSetup setup) : setup_(std::move(setup)) {
    setup_.validate();
    phy_ = setup_.phy ? *setup_.phy : phy_preset(phy_kind());
    mac_ = setup_.mac ? *setup_.mac : mac_preset(setup_.mac_kind);
    mac_.queue_capacity = setup_.queue_capacity;
    naka_ = setup_.nakagami ? *setup_.nakagami : nakagami_preset(phy_);
    phy_.validate();
    mac_.validate();
    naka_.validate();

    RngStream topology_rng(setup_.seed, "topology");
    RngStream traffic_rng(setup_.seed, "traffic");
    RngStream jitter_rng(setup_.seed, "proto.jitter");
    fading_rng_ = std::make_unique<RngStream>(setup_.seed, "fading");
    mac_rng_ = std::make_unique<RngStream>(setup_.seed, "mac.backoff");

    kinematics_ = build_highway(setup_.highway, setup_.n_nodes, setup_.speed_mps,
                                topology_rng);

    const ProtocolParams params =
        setup_.protocol_params ? *setup_.protocol_params
                               : preset_params(setup_.protocol).params;
    nodes_.resize(setup_.n_nodes);
    for (NodeId i = 0; i < setup_.n_nodes; ++i) {
      NodeState& n = nodes_[i];
      n.queue = TxQueue(setup_.queue_capacity);
      n.host = std::make_unique<detail::NodeHost>(*this, i);
      n.protocol = make_protocol(i, params, *n.host, jitter_rng);
    }
    busy_until_.assign(setup_.n_nodes, 0.0);

    const auto pairs = pick_flow_pairs(setup_.n_nodes, setup_.n_flows, traffic_rng);
    for (std::uint32_t f = 0; f < pairs.size(); ++f) {
      FlowState fs;
      fs.cfg.flow_id = f;
      fs.cfg.src = pairs[f].first;
      fs.cfg.dst = pairs[f].second;
      fs.cfg.start_s =
          setup_.flow_start_max_s > setup_.flow_start_min_s
              ? traffic_rng.uniform(setup_.flow_start_min_s, setup_.flow_start_max_s)
              : setup_.flow_start_min_s;
      fs.cfg.stop_s = setup_.duration_s;
      fs.cfg.interval_s = setup_.cbr_interval_s;
      fs.cfg.payload_bytes = setup_.payload_bytes;
      fs.total = cbr_send_count(fs.cfg.start_s, fs.cfg.stop_s, fs.cfg.interval_s);
      flows_.push_back(fs);
    }
  }

  MetricsSummary run() {
    for (NodeId i = 0; i < nodes_.size(); ++i) nodes_[i].protocol->start(0.0);
    for (std::uint32_t f = 0; f < flows_.size(); ++f)
      if (flows_[f].total > 0)
        engine_.schedule(flows_[f].cfg.start_s, flows_[f].cfg.src, EvAppSend{f});
    engine_.run_until(setup_.duration_s,
                      [this](SimTime at, NodeId target, SimEvent& ev) {
                        std::visit([&](auto& e) { handle(at, target, e); }, ev);
                      });
    return metrics_.summary(setup_.duration_s);
  }

  const MetricsAccumulator& metrics() const { return metrics_; }
  std::uint64_t trace_hash() const { return engine_.trace_hash(); }
  std::uint64_t events_processed() const { return engine_.processed(); }
  const SimulationSetup& setup() const { return setup_; }
  RoutingProtocol& protocol_of(NodeId n) { return *nodes_.at(n).protocol; }

  std::vector<CbrFlowConfig> flow_configs() const {
    std::vector<CbrFlowConfig> out;
    out.reserve(flows_.size());
    for (const auto& f : flows_) out.push_back(f.cfg);
    return out;
  }

  // Data packets neither delivered nor dropped when the run ended: parked in
  // discovery buffers, sitting in queues, or being served by a MAC.
  std::uint64_t undelivered_in_system() const {
    std::uint64_t count = 0;
    for (const NodeState& n : nodes_) {
      for (const auto& [dest, q] : n.parked) count += q.size();
      if (n.pending && n.pending->kind == FrameKind::Data) ++count;
      count += n.queue.data_size();
    }
    return count;
  }

  // Called once per control message leaving a node's routing agent (before
  // MAC queueing); used by tests to watch originations and forwards.
  std::function<void(NodeId, const ControlMessage&)> on_control_emit;
  // Called on each data delivery at its final destination.
  std::function<void(NodeId, std::uint64_t packet_id, SimTime)> on_delivery;
  // One line per MAC-level tx/rx/collision/drop when set.
  std::ostream* trace = nullptr;

 private:
  friend class detail::NodeHost;

  // MAC events reference transmissions by id; routing timers round-trip the
  // agent's own (kind, aux) pair.
  struct EvMacAttempt {};
  struct EvTxEnd { std::uint64_t tx_id; };
  struct EvRxEnd { std::uint64_t tx_id; };
  struct EvAckArrive { std::uint64_t tx_id; };
  struct EvAckTimeout { std::uint64_t tx_id; };
  struct EvRoutingTimer { std::uint32_t kind; std::uint32_t aux; };
  struct EvAppSend { std::uint32_t flow; };
  using SimEvent = std::variant<EvMacAttempt, EvTxEnd, EvRxEnd, EvAckArrive,
                                EvAckTimeout, EvRoutingTimer, EvAppSend>;

  enum class MacPhase { Idle, Deferring, Transmitting, AwaitingAck };

  struct NodeState {
    TxQueue queue{50};
    MacPhase mac_phase = MacPhase::Idle;
    std::uint32_t attempt = 0;
    bool attempt_scheduled = false;
    FramePtr pending;
    std::uint64_t current_tx = 0;
    std::unique_ptr<RoutingProtocol> protocol;
    std::unique_ptr<detail::NodeHost> host;
    std::map<NodeId, std::deque<FramePtr>> parked;
  };

  struct FlowState {
    CbrFlowConfig cfg;
    std::uint64_t total = 0;
    std::uint64_t emitted = 0;
  };

  struct Transmission {
    std::uint64_t id = 0;
    NodeId sender = 0;
    FramePtr frame;
    SimTime start = 0.0;
    SimTime end = 0.0;
    std::map<NodeId, double> sensed_dbm;  // nodes with sample >= cs threshold
  };

  PhyKind phy_kind() const {
    return setup_.mac_kind == MacKind::Dot11 ? PhyKind::Dot11 : PhyKind::Dot11p;
  }

  std::unique_ptr<RoutingProtocol> make_protocol(NodeId id,
                                                 const ProtocolParams& params,
                                                 ProtocolHost& host,
                                                 RngStream& jitter_rng) {
    if (const auto* p = std::get_if<DsdvParams>(&params)) {
      const double offset = jitter_rng.uniform(0.0, p->periodic_update_interval_s);
      return std::make_unique<DsdvAgent>(id, *p, host, offset);
    }
    if (const auto* p = std::get_if<OlsrParams>(&params)) {
      const double offset = jitter_rng.uniform(0.0, p->hello_interval_s);
      return std::make_unique<OlsrAgent>(id, *p, host, offset);
    }
    return std::make_unique<DymoAgent>(id, std::get<DymoParams>(params), host);
  }

  double node_distance(NodeId a, NodeId b, SimTime t) const {
    const Position pa = position_at(kinematics_[a], t, setup_.highway);
    const Position pb = position_at(kinematics_[b], t, setup_.highway);
    const double d = setup_.highway.wraparound
                         ? ring_distance(pa, pb, setup_.highway)
                         : distance(pa, pb);
    return std::max(d, 0.1);  // co-located nodes still need finite path loss
  }

  void trace_line(SimTime t, NodeId node, const char* what, const Frame& f) {
    if (!trace) return;
    const char* kind = f.kind == FrameKind::Data ? "DATA" : "CTRL";
    *trace << std::fixed << std::setprecision(9) << t << ' ' << node << ' '
           << what << ' ' << kind << " src=" << f.src << " dst=";
    if (f.is_broadcast())
      *trace << '*';
    else
      *trace << f.dst;
    *trace << " bytes=" << f.payload_bytes << '\n';
  }

  // ---- traffic ----

  void handle(SimTime now, NodeId node, EvAppSend& ev) {
    FlowState& fs = flows_[ev.flow];
    const std::uint64_t packet_id = next_packet_id_++;
    metrics_.record_app_send(packet_id, now, fs.cfg.payload_bytes);
    DataBody body;
    body.packet_id = packet_id;
    body.flow_id = fs.cfg.flow_id;
    body.origin = node;
    body.final_dst = fs.cfg.dst;
    body.ttl = setup_.data_ttl;
    body.sent_at = now;
    dispatch_data(node, body, fs.cfg.payload_bytes, /*forwarding=*/false, now);
    fs.emitted += 1;
    if (fs.emitted < fs.total) {
      const double next =
          fs.cfg.start_s + static_cast<double>(fs.emitted) * fs.cfg.interval_s;
      engine_.schedule(next, node, EvAppSend{ev.flow});
    }
  }

  void dispatch_data(NodeId node, const DataBody& body, std::uint32_t bytes,
                     bool forwarding, SimTime now) {
    NodeState& n = nodes_[node];
    const RouteAction act = n.protocol->route_data(body.final_dst, now);
    switch (act.kind) {
      case RouteAction::SendTo: {
        auto f = std::make_shared<Frame>();
        f->kind = FrameKind::Data;
        f->src = node;
        f->dst = act.next_hop;
        f->payload_bytes = bytes;
        f->born_at = now;
        f->body = body;
        if (!enqueue_frame(node, std::move(f), now))
          metrics_.record_drop_queue();
        break;
      }
      case RouteAction::Queued: {
        auto& bucket = n.parked[body.final_dst];
        if (bucket.size() >= setup_.discovery_buffer) {
          metrics_.record_drop_noroute();
        } else {
          auto f = std::make_shared<Frame>();
          f->kind = FrameKind::Data;
          f->src = node;
          f->dst = kBroadcastId;  // rewritten when a route appears
          f->payload_bytes = bytes;
          f->born_at = now;
          f->body = body;
          bucket.push_back(std::move(f));
        }
        break;
      }
      case RouteAction::NoRoute:
        metrics_.record_drop_noroute();
        if (forwarding) n.protocol->notify_forward_failure(body.final_dst, now);
        break;
    }
  }

  // ---- MAC ----

  bool enqueue_frame(NodeId node, FramePtr f, SimTime now) {
    NodeState& n = nodes_[node];
    const bool data = f->kind == FrameKind::Data;
    if (n.queue.enqueue(std::move(f)) == EnqueueResult::Dropped) {
      if (!data) ++control_queue_drops_;
      return data ? false : true;  // control drops are not the caller's concern
    }
    kick_mac(node, now);
    return true;
  }

  void kick_mac(NodeId node, SimTime now) {
    NodeState& n = nodes_[node];
    if (n.mac_phase != MacPhase::Idle || n.attempt_scheduled) return;
    if (!n.pending && n.queue.empty()) return;
    const double backoff =
        static_cast<double>(backoff_slots(mac_, n.attempt, *mac_rng_)) *
        mac_.slot_time_s;
    engine_.schedule(now + mac_.difs_s + backoff, node, EvMacAttempt{});
    n.attempt_scheduled = true;
    n.mac_phase = MacPhase::Deferring;
  }

  void handle(SimTime now, NodeId node, EvMacAttempt&) {
    NodeState& n = nodes_[node];
    n.attempt_scheduled = false;
    if (!n.pending) {
      if (n.queue.empty()) {
        n.mac_phase = MacPhase::Idle;
        return;
      }
      n.pending = n.queue.pop();
      n.attempt = 0;
    }
    if (busy_until_[node] > now + 1e-12) {
      const double backoff =
          static_cast<double>(backoff_slots(mac_, n.attempt, *mac_rng_)) *
          mac_.slot_time_s;
      engine_.schedule(busy_until_[node] + mac_.difs_s + backoff, node,
                       EvMacAttempt{});
      n.attempt_scheduled = true;
      n.mac_phase = MacPhase::Deferring;
      return;
    }
    begin_transmission(node, now);
  }

  void begin_transmission(NodeId node, SimTime now) {
    NodeState& n = nodes_[node];
    prune_transmissions(now);
    Transmission tx;
    tx.id = ++tx_counter_;
    tx.sender = node;
    tx.frame = n.pending;
    tx.start = now;
    tx.end = now + frame_airtime(mac_, phy_.data_rate_bps, n.pending->payload_bytes);
    for (NodeId j = 0; j < nodes_.size(); ++j) {
      if (j == node) continue;
      const double d = node_distance(node, j, now);
      const double mean_dbm = mean_rx_power(phy_, naka_, d);
      const double sample_dbm =
          sample_rx_power(mean_dbm, naka_.shape_at(d), *fading_rng_);
      if (sample_dbm >= phy_.cs_threshold_dbm) {
        tx.sensed_dbm[j] = sample_dbm;
        busy_until_[j] = std::max(busy_until_[j], tx.end);
        engine_.schedule(tx.end, j, EvRxEnd{tx.id});
      }
    }
    busy_until_[node] = std::max(busy_until_[node], tx.end);
    engine_.schedule(tx.end, node, EvTxEnd{tx.id});
    n.mac_phase = MacPhase::Transmitting;
    n.current_tx = tx.id;
    trace_line(now, node, "TX", *n.pending);
    active_tx_.emplace(tx.id, std::move(tx));
  }

  void prune_transmissions(SimTime now) {
    for (auto it = active_tx_.begin(); it != active_tx_.end();)
      it = it->second.end < now - 0.05 ? active_tx_.erase(it) : std::next(it);
  }

  void handle(SimTime now, NodeId node, EvTxEnd& ev) {
    NodeState& n = nodes_[node];
    auto it = active_tx_.find(ev.tx_id);
    if (it == active_tx_.end()) return;  // cannot happen within prune horizon
    const Transmission& tx = it->second;
    if (tx.frame->kind == FrameKind::RoutingControl) {
      const ControlMessage& msg = tx.frame->control();
      metrics_.record_control_tx(msg.kind(), tx.frame->payload_bytes);
    } else {
      metrics_.record_data_tx();
    }
    if (tx.frame->is_broadcast()) {
      finish_mac_service(node, now);
    } else {
      n.mac_phase = MacPhase::AwaitingAck;
      engine_.schedule(now + mac_.ack_timeout_s, node, EvAckTimeout{ev.tx_id});
    }
  }

  void finish_mac_service(NodeId node, SimTime now) {
    NodeState& n = nodes_[node];
    n.pending.reset();
    n.attempt = 0;
    n.current_tx = 0;
    n.mac_phase = MacPhase::Idle;
    kick_mac(node, now);
  }

  bool interfered(NodeId receiver, const Transmission& tx) const {
    for (const auto& [id, other] : active_tx_) {
      if (id == tx.id) continue;
      const bool overlap = other.start < tx.end && tx.start < other.end;
      if (!overlap) continue;
      if (other.sender == receiver || other.sensed_dbm.count(receiver)) return true;
    }
    return false;
  }

  void handle(SimTime now, NodeId node, EvRxEnd& ev) {
    auto it = active_tx_.find(ev.tx_id);
    if (it == active_tx_.end()) return;
    const Transmission& tx = it->second;
    const double sample = tx.sensed_dbm.at(node);
    switch (reception_decision(sample, phy_, interfered(node, tx))) {
      case Reception::Received:
        break;
      case Reception::Collided:
        metrics_.record_collision();
        trace_line(now, node, "COLLISION", *tx.frame);
        return;
      case Reception::CarrierOnly:
      case Reception::Undetected:
        return;
    }
    if (!tx.frame->is_broadcast() && tx.frame->dst != node) return;  // overheard
    trace_line(now, node, "RX", *tx.frame);
    if (!tx.frame->is_broadcast()) {
      const double ack_airtime =
          mac_.preamble_plus_header_time_s + 14.0 * 8.0 / phy_.data_rate_bps;
      engine_.schedule(now + mac_.sifs_s + ack_airtime, tx.sender,
                       EvAckArrive{ev.tx_id});
    }
    deliver_up(node, tx.frame, tx.sender, now);
  }

  void deliver_up(NodeId node, const FramePtr& frame, NodeId from, SimTime now) {
    if (frame->kind == FrameKind::RoutingControl) {
      nodes_[node].protocol->handle_control(frame->control(), from, now);
      return;
    }
    const DataBody& body = frame->data();
    if (body.final_dst == node) {
      metrics_.record_delivery(body.packet_id, now);
      if (on_delivery) on_delivery(node, body.packet_id, now);
      return;
    }
    if (body.ttl <= 1) {
      metrics_.record_drop_ttl();
      return;
    }
    DataBody fwd = body;
    fwd.ttl -= 1;
    dispatch_data(node, fwd, frame->payload_bytes, /*forwarding=*/true, now);
  }

  void handle(SimTime now, NodeId node, EvAckArrive& ev) {
    NodeState& n = nodes_[node];
    if (n.mac_phase != MacPhase::AwaitingAck || n.current_tx != ev.tx_id) return;
    finish_mac_service(node, now);
  }

  void handle(SimTime now, NodeId node, EvAckTimeout& ev) {
    NodeState& n = nodes_[node];
    if (n.mac_phase != MacPhase::AwaitingAck || n.current_tx != ev.tx_id) return;
    n.attempt += 1;
    if (n.attempt >= mac_.retry_limit) {
      const FramePtr failed = n.pending;
      if (failed->kind == FrameKind::Data)
        metrics_.record_drop_retry();
      else
        ++control_retry_drops_;
      trace_line(now, node, "DROP_RETRY", *failed);
      const NodeId lost_neighbor = failed->dst;
      n.pending.reset();
      n.attempt = 0;
      n.current_tx = 0;
      n.mac_phase = MacPhase::Idle;
      n.protocol->handle_link_break(lost_neighbor, now);
      kick_mac(node, now);
      return;
    }
    n.mac_phase = MacPhase::Deferring;
    const double backoff =
        static_cast<double>(backoff_slots(mac_, n.attempt, *mac_rng_)) *
        mac_.slot_time_s;
    engine_.schedule(now + mac_.difs_s + backoff, node, EvMacAttempt{});
    n.attempt_scheduled = true;
  }

  void handle(SimTime now, NodeId node, EvRoutingTimer& ev) {
    nodes_[node].protocol->handle_timer(ev.kind, ev.aux, now);
  }

  // ---- host services (called by routing agents) ----

  void host_send_control(NodeId node, const ControlMessage& msg, NodeId mac_dst) {
    if (on_control_emit) on_control_emit(node, msg);
    auto f = std::make_shared<Frame>();
    f->kind = FrameKind::RoutingControl;
    f->src = node;
    f->dst = mac_dst;
    f->payload_bytes = control_payload_bytes(msg);
    f->born_at = engine_.now();
    f->body = msg;
    enqueue_frame(node, std::move(f), engine_.now());
  }

  void host_schedule_timer(NodeId node, SimTime at, std::uint32_t kind,
                           std::uint32_t aux) {
    engine_.schedule(std::max(at, engine_.now()), node, EvRoutingTimer{kind, aux});
  }

  void host_flush_pending(NodeId node, NodeId dest) {
    NodeState& n = nodes_[node];
    auto it = n.parked.find(dest);
    if (it == n.parked.end()) return;
    std::deque<FramePtr> waiting = std::move(it->second);
    n.parked.erase(it);
    const SimTime now = engine_.now();
    for (FramePtr& f : waiting)
      dispatch_data(node, f->data(), f->payload_bytes, /*forwarding=*/false, now);
  }

  void host_drop_pending(NodeId node, NodeId dest) {
    NodeState& n = nodes_[node];
    auto it = n.parked.find(dest);
    if (it == n.parked.end()) return;
    for (std::size_t i = 0; i < it->second.size(); ++i)
      metrics_.record_drop_noroute();
    n.parked.erase(it);
  }

  SimulationSetup setup_;
  PhyParams phy_;
  MacParams mac_;
  NakagamiParams naka_;

  Engine<SimEvent> engine_;
  MetricsAccumulator metrics_;
  std::vector<NodeKinematics> kinematics_;
  std::vector<NodeState> nodes_;
  std::vector<FlowState> flows_;
  std::vector<double> busy_until_;
  std::map<std::uint64_t, Transmission> active_tx_;
  std::unique_ptr<RngStream> fading_rng_;
  std::unique_ptr<RngStream> mac_rng_;
  std::uint64_t tx_counter_ = 0;
  std::uint64_t next_packet_id_ = 0;
  std::uint64_t control_queue_drops_ = 0;
  std::uint64_t control_retry_drops_ = 0;
};

namespace detail {

inline void NodeHost::send_control(const ControlMessage& msg, NodeId mac_dst) {
  sim_.host_send_control(node_, msg, mac_dst);
}
inline void NodeHost::schedule_timer(SimTime at, std::uint32_t kind,
                                     std::uint32_t aux) {
  sim_.host_schedule_timer(node_, at, kind, aux);
}
inline void NodeHost::flush_pending(NodeId dest) {
  sim_.host_flush_pending(node_, dest);
}
inline void NodeHost::drop_pending(NodeId dest) {
  sim_.host_drop_pending(node_, dest);
}

}  // namespace detail

}  // namespace vanetsim
