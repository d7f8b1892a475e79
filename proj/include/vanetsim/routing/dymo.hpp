#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <vector>

#include "vanetsim/routing/dsdv.hpp"  // seq_newer
#include "vanetsim/routing/presets.hpp"
#include "vanetsim/routing/protocol.hpp"

namespace vanetsim {

// Reactive on-demand routing.  Routes are discovered with flooded RREQs,
// answered by the target with a unicast RREP along the reverse path, and
// expire unless refreshed by use.  Every RREQ transmission (origination and
// forwarding alike) passes a sliding one-second rate limiter.
class DymoAgent : public RoutingProtocol {
 public:
  static constexpr std::uint32_t kTimerRreqRetry = 0;

  DymoAgent(NodeId self, const DymoParams& params, ProtocolHost& host)
      : self_(self), params_(params), host_(host) {
    params_.validate();
  }

  void start(SimTime) override {}

  void handle_control(const ControlMessage& msg, NodeId from, SimTime now) override {
    switch (msg.kind()) {
      case MsgKind::Rreq:
        process_rreq(std::get<RreqBody>(msg.body), from, now);
        break;
      case MsgKind::Rrep:
        process_rrep(std::get<RrepBody>(msg.body), from, now);
        break;
      case MsgKind::Rerr:
        process_rerr(std::get<RerrBody>(msg.body), from, now);
        break;
      default:
        break;
    }
  }

  void handle_timer(std::uint32_t kind, std::uint32_t aux, SimTime now) override {
    if (kind != kTimerRreqRetry) return;
    const NodeId target = aux;
    auto it = discovery_.find(target);
    if (it == discovery_.end()) return;  // answered meanwhile
    if (route_lookup(target, now)) {
      discovery_.erase(it);
      return;
    }
    if (it->second.tries >= params_.rreq_tries) {
      discovery_.erase(it);
      host_.drop_pending(target);
      return;
    }
    attempt_rreq(target, now);
  }

  void handle_link_break(NodeId neighbor, SimTime now) override {
    std::vector<RerrEntry> lost;
    for (auto& [dest, e] : table_) {
      if (e.valid && e.next_hop == neighbor && now <= e.expires_at) {
        e.valid = false;
        lost.push_back({dest, e.seq_num});
      }
    }
    if (!lost.empty()) emit_rerr(std::move(lost), now);
  }

  RouteAction route_data(NodeId dest, SimTime now) override {
    if (dest == self_) return {RouteAction::SendTo, self_};
    auto it = table_.find(dest);
    if (it != table_.end() && it->second.usable(now)) {
      it->second.expires_at = now + params_.route_timeout_s;  // in active use
      return {RouteAction::SendTo, it->second.next_hop};
    }
    if (!discovery_.count(dest)) {
      discovery_[dest] = {};
      attempt_rreq(dest, now);
    }
    return {RouteAction::Queued, 0};
  }

  std::optional<NodeId> route_lookup(NodeId dest, SimTime now) override {
    if (dest == self_) return self_;
    auto it = table_.find(dest);
    if (it == table_.end() || !it->second.usable(now)) return std::nullopt;
    return it->second.next_hop;
  }

  RouteTable table_snapshot(SimTime) override { return table_; }

  void notify_forward_failure(NodeId dest, SimTime now) override {
    std::uint32_t seq = 0;
    auto it = table_.find(dest);
    if (it != table_.end()) seq = it->second.seq_num;
    emit_rerr({{dest, seq}}, now);
  }

  // Transmissions allowed by the rate limiter in the trailing one second.
  std::size_t rreq_budget(SimTime now) {
    prune_window(now);
    const auto limit = static_cast<std::size_t>(params_.rreq_rate_limit_per_s);
    return limit > rreq_window_.size() ? limit - rreq_window_.size() : 0;
  }

  std::uint32_t own_sequence() const { return own_seq_; }
  bool discovery_in_progress(NodeId target) const {
    return discovery_.count(target) > 0;
  }

 private:
  struct Discovery {
    std::uint32_t tries = 0;
  };

  void prune_window(SimTime now) {
    while (!rreq_window_.empty() && rreq_window_.front() <= now - 1.0)
      rreq_window_.pop_front();
  }

  // One RREQ transmission wants out; returns false when the limiter says no.
  bool limiter_admits(SimTime now) {
    prune_window(now);
    if (rreq_window_.size() >=
        static_cast<std::size_t>(params_.rreq_rate_limit_per_s))
      return false;
    rreq_window_.push_back(now);
    return true;
  }

  void attempt_rreq(NodeId target, SimTime now) {
    Discovery& d = discovery_[target];
    d.tries += 1;  // a suppressed attempt still consumes a try
    if (limiter_admits(now)) {
      RreqBody body;
      body.orig = self_;
      body.target = target;
      body.orig_seq = ++own_seq_;
      body.hop_limit = params_.hop_limit;
      body.hop_count = 0;
      ControlMessage msg;
      msg.body = body;
      msg.origin = self_;
      msg.emitted_at = now;
      host_.send_control(msg, kBroadcastId);
    }
    host_.schedule_timer(now + params_.rreq_wait_time_s, kTimerRreqRetry, target);
  }

  void refresh_neighbor(NodeId nbr, SimTime now) {
    auto it = table_.find(nbr);
    if (it != table_.end() && it->second.valid && it->second.metric == 1) {
      it->second.expires_at = now + params_.route_timeout_s;
      return;
    }
    if (it == table_.end() || !it->second.usable(now) || it->second.metric > 1) {
      RouteEntry e;
      e.dest = nbr;
      e.next_hop = nbr;
      e.metric = 1;
      e.seq_num = it != table_.end() ? it->second.seq_num : 0;
      e.installed_at = now;
      e.expires_at = now + params_.route_timeout_s;
      table_[nbr] = e;
    }
  }

  // Install or refresh a route learned from a routing message.
  void learn_route(NodeId dest, NodeId next_hop, std::uint32_t metric,
                   std::uint32_t seq, SimTime now) {
    auto it = table_.find(dest);
    const bool adopt = it == table_.end() || !it->second.usable(now) ||
                       seq_newer(seq, it->second.seq_num) ||
                       (seq == it->second.seq_num && metric < it->second.metric);
    if (!adopt) return;
    RouteEntry e;
    e.dest = dest;
    e.next_hop = next_hop;
    e.metric = metric;
    e.seq_num = seq;
    e.installed_at = now;
    e.expires_at = now + params_.route_timeout_s;
    table_[dest] = e;
  }

  void process_rreq(const RreqBody& rreq, NodeId from, SimTime now) {
    if (rreq.orig == self_) return;
    refresh_neighbor(from, now);
    learn_route(rreq.orig, from, rreq.hop_count + 1, rreq.orig_seq, now);

    auto seen = rreq_seen_.find(rreq.orig);
    if (seen != rreq_seen_.end() && !seq_newer(rreq.orig_seq, seen->second))
      return;
    rreq_seen_[rreq.orig] = rreq.orig_seq;

    if (rreq.target == self_) {
      RrepBody body;
      body.orig = self_;
      body.target = rreq.orig;
      body.orig_seq = ++own_seq_;
      body.hop_count = 0;
      ControlMessage msg;
      msg.body = body;
      msg.origin = self_;
      msg.emitted_at = now;
      host_.send_control(msg, from);  // unicast down the reverse path
      return;
    }
    if (rreq.hop_count + 1 >= rreq.hop_limit) return;
    if (!limiter_admits(now)) return;
    RreqBody fwd = rreq;
    fwd.hop_count += 1;
    ControlMessage msg;
    msg.body = fwd;
    msg.origin = rreq.orig;
    msg.emitted_at = now;
    host_.send_control(msg, kBroadcastId);
  }

  void process_rrep(const RrepBody& rrep, NodeId from, SimTime now) {
    refresh_neighbor(from, now);
    learn_route(rrep.orig, from, rrep.hop_count + 1, rrep.orig_seq, now);

    if (rrep.target == self_) {
      discovery_.erase(rrep.orig);
      host_.flush_pending(rrep.orig);
      return;
    }
    const auto nh = route_lookup(rrep.target, now);
    if (!nh) return;  // reverse path gone; requester will retry
    RrepBody fwd = rrep;
    fwd.hop_count += 1;
    if (fwd.hop_count >= params_.hop_limit) return;
    ControlMessage msg;
    msg.body = fwd;
    msg.origin = rrep.orig;
    msg.emitted_at = now;
    host_.send_control(msg, *nh);
  }

  void process_rerr(const RerrBody& rerr, NodeId from, SimTime now) {
    std::vector<RerrEntry> propagate;
    for (const RerrEntry& u : rerr.unreachable) {
      auto it = table_.find(u.dest);
      if (it == table_.end() || !it->second.valid) continue;
      if (it->second.next_hop != from) continue;
      if (seq_newer(it->second.seq_num, u.seq)) continue;  // ours is fresher
      it->second.valid = false;
      propagate.push_back({u.dest, it->second.seq_num});
    }
    if (!propagate.empty()) emit_rerr(std::move(propagate), now);
  }

  void emit_rerr(std::vector<RerrEntry> unreachable, SimTime now) {
    RerrBody body;
    body.unreachable = std::move(unreachable);
    ControlMessage msg;
    msg.body = std::move(body);
    msg.origin = self_;
    msg.emitted_at = now;
    host_.send_control(msg, kBroadcastId);
  }

  NodeId self_;
  DymoParams params_;
  ProtocolHost& host_;

  RouteTable table_;
  std::uint32_t own_seq_ = 0;
  std::map<NodeId, std::uint32_t> rreq_seen_;
  std::map<NodeId, Discovery> discovery_;
  std::deque<SimTime> rreq_window_;
};

}  // namespace vanetsim
