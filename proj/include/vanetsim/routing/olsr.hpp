#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "vanetsim/routing/presets.hpp"
#include "vanetsim/routing/protocol.hpp"

namespace vanetsim {

// Greedy multipoint relay selection.  Neighbors that are the sole cover of
// some strict two-hop node are taken first, then neighbors covering the most
// still-uncovered two-hop nodes (ties broken by lowest id).
inline std::set<NodeId> select_mprs(
    NodeId self, const std::set<NodeId>& sym_neighbors,
    const std::map<NodeId, std::set<NodeId>>& two_hop_map) {
  std::set<NodeId> strict_two_hop;
  for (const auto& [nbr, reached] : two_hop_map) {
    if (!sym_neighbors.count(nbr))
      throw InconsistentTopologySets("two-hop set keyed by non-neighbor " +
                                     std::to_string(nbr));
    for (const NodeId t : reached)
      if (t != self && !sym_neighbors.count(t)) strict_two_hop.insert(t);
  }

  auto covers = [&](NodeId nbr, NodeId target) {
    auto it = two_hop_map.find(nbr);
    return it != two_hop_map.end() && it->second.count(target) > 0;
  };

  std::set<NodeId> mprs;
  std::set<NodeId> uncovered = strict_two_hop;

  for (const NodeId t : strict_two_hop) {
    NodeId sole = kBroadcastId;
    int n_covering = 0;
    for (const NodeId nbr : sym_neighbors) {
      if (covers(nbr, t)) {
        ++n_covering;
        sole = nbr;
      }
    }
    if (n_covering == 1) mprs.insert(sole);
  }
  for (const NodeId m : mprs) {
    for (auto it = uncovered.begin(); it != uncovered.end();)
      it = covers(m, *it) ? uncovered.erase(it) : std::next(it);
  }

  while (!uncovered.empty()) {
    NodeId best = kBroadcastId;
    std::size_t best_count = 0;
    for (const NodeId nbr : sym_neighbors) {
      if (mprs.count(nbr)) continue;
      std::size_t count = 0;
      for (const NodeId t : uncovered)
        if (covers(nbr, t)) ++count;
      if (count > best_count || (count == best_count && count > 0 && nbr < best)) {
        best = nbr;
        best_count = count;
      }
    }
    if (best_count == 0) break;  // unreachable two-hop nodes; stale data
    mprs.insert(best);
    for (auto it = uncovered.begin(); it != uncovered.end();)
      it = covers(best, *it) ? uncovered.erase(it) : std::next(it);
  }
  return mprs;
}

// Optimized Link State Routing.  Hellos build the symmetric link and two-hop
// sets, MPR selectors are flooded in TC messages, and routes come from a
// shortest-path sweep over neighbors plus the learned topology tuples.
class OlsrAgent : public RoutingProtocol {
 public:
  static constexpr std::uint32_t kTimerHello = 0;
  static constexpr std::uint32_t kTimerTc = 1;

  OlsrAgent(NodeId self, const OlsrParams& params, ProtocolHost& host,
            double start_offset_s)
      : self_(self), params_(params), host_(host), start_offset_(start_offset_s) {
    params_.validate();
  }

  void start(SimTime now) override {
    host_.schedule_timer(now + start_offset_, kTimerHello, 0);
    host_.schedule_timer(now + start_offset_ + 0.5 * params_.tc_interval_s,
                         kTimerTc, 0);
  }

  void handle_control(const ControlMessage& msg, NodeId from, SimTime now) override {
    if (msg.kind() == MsgKind::Hello) {
      process_hello(std::get<HelloBody>(msg.body), from, now);
    } else if (msg.kind() == MsgKind::Tc) {
      process_tc(msg, from, now);
    }
  }

  void process_hello(const HelloBody& hello, NodeId from, SimTime now) {
    const double hold = params_.neighbor_hold_time_s;
    LinkInfo& link = links_[from];
    link.heard_until = now + hold;
    bool lists_me = false;
    for (const HelloNeighbor& hn : hello.neighbors) {
      if (hn.id == self_) {
        lists_me = true;
        if (hn.status == LinkStatus::Mpr) selector_until_[from] = now + hold;
      }
    }
    if (lists_me) link.sym_until = now + hold;

    std::set<NodeId>& reached = two_hop_[from];
    reached.clear();
    for (const HelloNeighbor& hn : hello.neighbors)
      if (hn.status != LinkStatus::Heard && hn.id != self_) reached.insert(hn.id);
    two_hop_until_[from] = now + hold;

    mpr_stale_ = true;
    routes_stale_ = true;
  }

  void process_tc(const ControlMessage& msg, NodeId from, SimTime now) {
    const TcBody& tc = std::get<TcBody>(msg.body);
    if (msg.origin == self_) return;

    auto seen = tc_seen_.find(msg.origin);
    const bool duplicate =
        seen != tc_seen_.end() && !seq_newer(tc.msg_seq, seen->second);
    if (duplicate) return;
    tc_seen_[msg.origin] = tc.msg_seq;

    auto topo = topology_.find(msg.origin);
    if (topo == topology_.end() || seq_newer(tc.ansn, topo->second.ansn)) {
      TopologyTuple& t = topology_[msg.origin];
      t.ansn = tc.ansn;
      t.advertised.assign(tc.advertised.begin(), tc.advertised.end());
      routes_stale_ = true;
    }
    topology_[msg.origin].expires_at = now + params_.topology_hold_time_s;

    // Default forwarding: relay only messages arriving from a neighbor that
    // selected us as MPR.
    if (selector_until_.count(from) && selector_until_[from] > now) {
      ControlMessage fwd = msg;
      host_.send_control(fwd, kBroadcastId);
    }
  }

  void handle_timer(std::uint32_t kind, std::uint32_t, SimTime now) override {
    if (kind == kTimerHello) {
      expire_state(now);
      emit_hello(now);
      host_.schedule_timer(now + params_.hello_interval_s, kTimerHello, 0);
    } else if (kind == kTimerTc) {
      expire_state(now);
      emit_tc(now);
      host_.schedule_timer(now + params_.tc_interval_s, kTimerTc, 0);
    }
  }

  void handle_link_break(NodeId neighbor, SimTime now) override {
    auto it = links_.find(neighbor);
    if (it != links_.end()) {
      links_.erase(it);
      two_hop_.erase(neighbor);
      two_hop_until_.erase(neighbor);
      mpr_stale_ = true;
      routes_stale_ = true;
    }
    (void)now;
  }

  RouteAction route_data(NodeId dest, SimTime now) override {
    const auto nh = route_lookup(dest, now);
    if (!nh) return {RouteAction::NoRoute, 0};
    return {RouteAction::SendTo, *nh};
  }

  std::optional<NodeId> route_lookup(NodeId dest, SimTime now) override {
    if (dest == self_) return self_;
    recompute_routes_if_stale(now);
    auto it = routes_.find(dest);
    if (it == routes_.end()) return std::nullopt;
    return it->second.next_hop;
  }

  RouteTable table_snapshot(SimTime now) override {
    recompute_routes_if_stale(now);
    return routes_;
  }

  const std::set<NodeId>& mpr_set(SimTime now) {
    expire_state(now);
    recompute_mprs_if_stale();
    return mprs_;
  }

  std::set<NodeId> selector_set(SimTime now) const {
    std::set<NodeId> out;
    for (const auto& [nbr, until] : selector_until_)
      if (until > now) out.insert(nbr);
    return out;
  }

 private:
  struct LinkInfo {
    double heard_until = 0.0;
    double sym_until = 0.0;
  };
  struct TopologyTuple {
    std::uint32_t ansn = 0;
    std::vector<NodeId> advertised;  // MPR selectors of the origin
    double expires_at = 0.0;
  };

  std::set<NodeId> sym_neighbors(SimTime now) const {
    std::set<NodeId> out;
    for (const auto& [nbr, link] : links_)
      if (link.sym_until > now) out.insert(nbr);
    return out;
  }

  void expire_state(SimTime now) {
    for (auto it = links_.begin(); it != links_.end();) {
      if (it->second.heard_until <= now) {
        two_hop_.erase(it->first);
        two_hop_until_.erase(it->first);
        it = links_.erase(it);
        mpr_stale_ = true;
        routes_stale_ = true;
      } else {
        ++it;
      }
    }
    for (auto it = two_hop_until_.begin(); it != two_hop_until_.end();) {
      if (it->second <= now) {
        two_hop_.erase(it->first);
        it = two_hop_until_.erase(it);
        mpr_stale_ = true;
        routes_stale_ = true;
      } else {
        ++it;
      }
    }
    for (auto it = selector_until_.begin(); it != selector_until_.end();) {
      it = it->second <= now ? selector_until_.erase(it) : std::next(it);
    }
    for (auto it = topology_.begin(); it != topology_.end();) {
      if (it->second.expires_at <= now) {
        it = topology_.erase(it);
        routes_stale_ = true;
      } else {
        ++it;
      }
    }
    last_expire_ = now;
  }

  void recompute_mprs_if_stale() {
    if (!mpr_stale_) return;
    const std::set<NodeId> nbrs = sym_neighbors(last_expire_);
    std::map<NodeId, std::set<NodeId>> live_two_hop;
    for (const auto& [nbr, reached] : two_hop_)
      if (nbrs.count(nbr)) live_two_hop[nbr] = reached;
    mprs_ = select_mprs(self_, nbrs, live_two_hop);
    mpr_stale_ = false;
  }

  void emit_hello(SimTime now) {
    recompute_mprs_if_stale();
    HelloBody body;
    for (const auto& [nbr, link] : links_) {
      LinkStatus status = LinkStatus::Heard;
      if (link.sym_until > now)
        status = mprs_.count(nbr) ? LinkStatus::Mpr : LinkStatus::Symmetric;
      body.neighbors.push_back({nbr, status});
    }
    ControlMessage msg;
    msg.body = std::move(body);
    msg.origin = self_;
    msg.emitted_at = now;
    host_.send_control(msg, kBroadcastId);
  }

  void emit_tc(SimTime now) {
    const std::set<NodeId> selectors = selector_set(now);
    if (selectors.empty()) return;  // nobody routes through us
    if (selectors != last_advertised_) {
      ++ansn_;
      last_advertised_ = selectors;
    }
    TcBody body;
    body.advertised.assign(selectors.begin(), selectors.end());
    body.ansn = ansn_;
    body.msg_seq = ++msg_seq_;
    ControlMessage msg;
    msg.body = std::move(body);
    msg.origin = self_;
    msg.emitted_at = now;
    host_.send_control(msg, kBroadcastId);
  }

  void recompute_routes_if_stale(SimTime now) {
    if (now > last_expire_) expire_state(now);
    if (!routes_stale_) return;
    routes_.clear();

    const std::set<NodeId> nbrs = sym_neighbors(now);
    for (const NodeId n : nbrs) {
      RouteEntry e;
      e.dest = n;
      e.next_hop = n;
      e.metric = 1;
      e.installed_at = now;
      routes_[n] = e;
    }
    // Strict two-hop destinations through the lowest covering neighbor.
    for (const auto& [nbr, reached] : two_hop_) {
      if (!nbrs.count(nbr)) continue;
      for (const NodeId t : reached) {
        if (t == self_ || routes_.count(t)) continue;
        RouteEntry e;
        e.dest = t;
        e.next_hop = nbr;
        e.metric = 2;
        e.installed_at = now;
        routes_[t] = e;
      }
    }
    // Extend with topology tuples: an origin advertising X means origin can
    // reach X in one hop, so a route to the origin yields origin's selectors
    // one hop further out.
    std::uint32_t max_metric = 0;
    for (const auto& [dest, e] : routes_) max_metric = std::max(max_metric, e.metric);
    for (std::uint32_t h = 1; h <= max_metric; ++h) {
      std::map<NodeId, NodeId> additions;  // dest -> lowest next_hop at h+1
      for (const auto& [origin, tuple] : topology_) {
        auto ro = routes_.find(origin);
        if (ro == routes_.end() || ro->second.metric != h) continue;
        for (const NodeId dst : tuple.advertised) {
          if (dst == self_ || routes_.count(dst)) continue;
          auto cur = additions.find(dst);
          if (cur == additions.end() || ro->second.next_hop < cur->second)
            additions[dst] = ro->second.next_hop;
        }
      }
      for (const auto& [dst, nh] : additions) {
        RouteEntry e;
        e.dest = dst;
        e.next_hop = nh;
        e.metric = h + 1;
        e.installed_at = now;
        routes_[dst] = e;
        max_metric = std::max(max_metric, h + 1);
      }
    }
    routes_stale_ = false;
  }

  NodeId self_;
  OlsrParams params_;
  ProtocolHost& host_;
  double start_offset_;

  std::map<NodeId, LinkInfo> links_;
  std::map<NodeId, std::set<NodeId>> two_hop_;
  std::map<NodeId, double> two_hop_until_;
  std::map<NodeId, double> selector_until_;
  std::map<NodeId, TopologyTuple> topology_;
  std::map<NodeId, std::uint32_t> tc_seen_;

  std::set<NodeId> mprs_;
  std::set<NodeId> last_advertised_;
  bool mpr_stale_ = true;
  std::uint32_t ansn_ = 0;
  std::uint32_t msg_seq_ = 0;

  RouteTable routes_;
  bool routes_stale_ = true;
  SimTime last_expire_ = -1.0;
};

}  // namespace vanetsim
