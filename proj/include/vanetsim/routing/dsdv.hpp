#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "vanetsim/routing/presets.hpp"
#include "vanetsim/routing/protocol.hpp"

namespace vanetsim {

// Wraparound-aware sequence comparison (half-range rule): a is newer than b.
inline bool seq_newer(std::uint32_t a, std::uint32_t b) {
  return static_cast<std::int32_t>(a - b) > 0;
}

// Destination-Sequenced Distance Vector.  Even sequence numbers mark live
// routes, odd ones broken routes; a route is adopted when its sequence number
// is newer, or equally fresh with a better metric.  Periodic dumps advertise
// the table; triggered incremental updates advertise significant changes,
// rate limited and damped by a weighted settling time.
class DsdvAgent : public RoutingProtocol {
 public:
  static constexpr std::uint32_t kTimerPeriodic = 0;
  static constexpr std::uint32_t kTimerTriggerFlush = 1;

  DsdvAgent(NodeId self, const DsdvParams& params, ProtocolHost& host,
            double start_offset_s)
      : self_(self), params_(params), host_(host), start_offset_(start_offset_s) {
    params_.validate();
  }

  void start(SimTime now) override {
    RouteEntry self_entry;
    self_entry.dest = self_;
    self_entry.next_hop = self_;
    self_entry.metric = 0;
    self_entry.seq_num = self_seq_;
    self_entry.installed_at = now;
    table_[self_] = self_entry;
    host_.schedule_timer(now + start_offset_, kTimerPeriodic, 0);
  }

  void handle_control(const ControlMessage& msg, NodeId from, SimTime now) override {
    if (msg.kind() != MsgKind::DsdvUpdate) return;
    process_update(std::get<DsdvUpdateBody>(msg.body), from, now);
  }

  // Core adoption rule, exposed for direct testing.
  void process_update(const DsdvUpdateBody& update, NodeId from, SimTime now) {
    last_heard_[from] = now;
    bool want_trigger = false;
    for (const DsdvAdvert& adv : update.entries) {
      if (adv.dest == self_) {
        // Someone advertises me as broken with a fresher sequence number:
        // answer with an even number above it.
        if ((adv.seq & 1u) != 0 && seq_newer(adv.seq, self_seq_)) {
          self_seq_ = adv.seq + 1;
          table_[self_].seq_num = self_seq_;
          mark_dirty(self_);
          want_trigger = true;
        }
        continue;
      }
      const std::uint32_t new_metric =
          adv.metric >= kInfiniteMetric ? kInfiniteMetric : adv.metric + 1;
      auto it = table_.find(adv.dest);
      const bool have = it != table_.end();
      const bool adopt =
          !have || seq_newer(adv.seq, it->second.seq_num) ||
          (adv.seq == it->second.seq_num && new_metric < it->second.metric);
      if (!adopt) continue;

      const std::uint32_t old_metric = have ? it->second.metric : kInfiniteMetric;
      const NodeId old_next = have ? it->second.next_hop : kBroadcastId;
      const bool fresh_seq = !have || seq_newer(adv.seq, it->second.seq_num);

      RouteEntry e;
      e.dest = adv.dest;
      e.next_hop = from;
      e.metric = new_metric;
      e.seq_num = adv.seq;
      e.installed_at = now;
      table_[adv.dest] = e;

      update_settling(adv.dest, adv.seq, new_metric, old_metric, fresh_seq, now);

      const bool significant = !have || new_metric != old_metric ||
                               old_next != from || new_metric == kInfiniteMetric;
      if (significant) {
        mark_dirty(adv.dest);
        want_trigger = true;
      }
    }
    if (want_trigger) request_trigger(now);
  }

  void handle_timer(std::uint32_t kind, std::uint32_t, SimTime now) override {
    if (kind == kTimerPeriodic) {
      sweep_dead_neighbors(now);
      self_seq_ += 2;
      table_[self_].seq_num = self_seq_;
      const bool full = now + 1e-9 >= last_full_dump_ + params_.full_dump_interval_s;
      emit_advert(full, now);
      host_.schedule_timer(now + params_.periodic_update_interval_s, kTimerPeriodic, 0);
    } else if (kind == kTimerTriggerFlush) {
      trigger_scheduled_ = false;
      if (has_advertisable_change(now)) emit_advert(false, now);
    }
  }

  void handle_link_break(NodeId neighbor, SimTime now) override {
    last_heard_.erase(neighbor);
    bool broke_any = false;
    for (auto& [dest, e] : table_) {
      if (dest == self_ || e.metric >= kInfiniteMetric) continue;
      if (e.next_hop == neighbor) {
        e.metric = kInfiniteMetric;
        e.seq_num += 1;  // odd: broken
        e.installed_at = now;
        mark_dirty(dest);
        broke_any = true;
      }
    }
    if (broke_any) request_trigger(now);
  }

  RouteAction route_data(NodeId dest, SimTime now) override {
    const auto nh = route_lookup(dest, now);
    if (!nh) return {RouteAction::NoRoute, 0};
    return {RouteAction::SendTo, *nh};
  }

  std::optional<NodeId> route_lookup(NodeId dest, SimTime now) override {
    if (dest == self_) return self_;
    auto it = table_.find(dest);
    if (it == table_.end()) return std::nullopt;
    const RouteEntry& e = it->second;
    if (!e.usable(now) || (e.seq_num & 1u) != 0) return std::nullopt;
    return e.next_hop;
  }

  RouteTable table_snapshot(SimTime) override { return table_; }

  std::uint32_t self_sequence() const { return self_seq_; }

 private:
  struct Settling {
    double estimate_s = 6.0;      // weighted average settling time
    std::uint32_t pending_seq = 0;
    std::uint32_t pending_metric = 0;
    double first_heard_at = 0.0;
    double settled_at = 0.0;  // routes are withheld from triggers until then
  };

  void update_settling(NodeId dest, std::uint32_t seq, std::uint32_t metric,
                       std::uint32_t old_metric, bool fresh_seq, SimTime now) {
    Settling& s = settling_[dest];
    if (metric >= kInfiniteMetric) {
      s.settled_at = now;  // breakage is never damped
      return;
    }
    if (fresh_seq) {
      if (metric > old_metric) {
        // A fresh but worse route may still be beaten by a late better one;
        // hold it back for twice the observed settling time.
        s.settled_at = now + 2.0 * s.estimate_s;
      } else {
        s.settled_at = now;
      }
      s.pending_seq = seq;
      s.pending_metric = metric;
      s.first_heard_at = now;
    } else if (seq == s.pending_seq && metric < s.pending_metric) {
      // The better path for this sequence number arrived; fold the wait into
      // the settling estimate.
      const double waited = now - s.first_heard_at;
      s.estimate_s = params_.settling_weight * s.estimate_s +
                     (1.0 - params_.settling_weight) * waited;
      s.pending_metric = metric;
    }
  }

  bool settled(NodeId dest, SimTime now) const {
    auto it = settling_.find(dest);
    return it == settling_.end() || now + 1e-12 >= it->second.settled_at;
  }

  void mark_dirty(NodeId dest) { dirty_.insert(dest); }

  bool has_advertisable_change(SimTime now) const {
    for (const NodeId d : dirty_)
      if (d == self_ || settled(d, now)) return true;
    return false;
  }

  void request_trigger(SimTime now) {
    if (trigger_scheduled_) return;
    trigger_scheduled_ = true;
    const SimTime at = std::max(now, last_advert_ + params_.min_trigger_interval_s);
    host_.schedule_timer(at, kTimerTriggerFlush, 0);
  }

  void emit_advert(bool full_dump, SimTime now) {
    DsdvUpdateBody body;
    body.full_dump = full_dump;
    if (full_dump) {
      for (const auto& [dest, e] : table_)
        body.entries.push_back({dest, e.seq_num, e.metric});
      dirty_.clear();
      last_full_dump_ = now;
    } else {
      body.entries.push_back({self_, self_seq_, 0});
      std::vector<NodeId> advertised;
      for (const NodeId d : dirty_) {
        if (d == self_) continue;
        auto it = table_.find(d);
        if (it == table_.end()) continue;
        const bool broken = it->second.metric >= kInfiniteMetric;
        if (!broken && !settled(d, now)) continue;  // still damped
        body.entries.push_back({d, it->second.seq_num, it->second.metric});
        advertised.push_back(d);
      }
      for (const NodeId d : advertised) dirty_.erase(d);
      dirty_.erase(self_);
    }
    ControlMessage msg;
    msg.body = std::move(body);
    msg.origin = self_;
    msg.emitted_at = now;
    host_.send_control(msg, kBroadcastId);
    last_advert_ = now;
  }

  void sweep_dead_neighbors(SimTime now) {
    const double timeout =
        params_.neighbor_timeout_multiplier * params_.periodic_update_interval_s;
    std::vector<NodeId> dead;
    for (const auto& [nbr, heard] : last_heard_)
      if (now - heard > timeout) dead.push_back(nbr);
    for (const NodeId nbr : dead) handle_link_break(nbr, now);
  }

  NodeId self_;
  DsdvParams params_;
  ProtocolHost& host_;
  double start_offset_;

  RouteTable table_;
  std::uint32_t self_seq_ = 0;  // even while alive
  std::map<NodeId, SimTime> last_heard_;
  std::map<NodeId, Settling> settling_;
  std::set<NodeId> dirty_;
  bool trigger_scheduled_ = false;
  SimTime last_advert_ = -1e9;
  SimTime last_full_dump_ = -1e9;
};

}  // namespace vanetsim
