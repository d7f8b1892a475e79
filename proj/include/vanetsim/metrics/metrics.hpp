#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>

#include "vanetsim/core/errors.hpp"
#include "vanetsim/core/engine.hpp"
#include "vanetsim/routing/messages.hpp"

namespace vanetsim {

// Aggregate figures for one run.  Delay and routing load are undefined until
// at least one data packet is delivered.
struct MetricsSummary {
  double throughput_Bps = 0.0;          // delivered payload bytes per second
  std::optional<double> e2ed_s;         // mean end-to-end delay, delivered only
  std::optional<double> nrl;            // control transmissions per delivery
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t control_tx = 0;         // hop-wise, every transmission counts
  std::uint64_t drops_queue = 0;
  std::uint64_t drops_noroute = 0;
  std::uint64_t collisions = 0;
};

class MetricsAccumulator {
 public:
  void record_app_send(std::uint64_t packet_id, SimTime at, std::uint32_t bytes) {
    auto [it, fresh] = sends_.try_emplace(packet_id, SendInfo{at, bytes, false});
    if (!fresh) throw SimError("duplicate packet id " + std::to_string(packet_id));
    (void)it;
    ++sent_;
  }

  void record_delivery(std::uint64_t packet_id, SimTime at) {
    auto it = sends_.find(packet_id);
    if (it == sends_.end())
      throw SimError("delivery for unknown packet " + std::to_string(packet_id));
    if (it->second.delivered)
      throw DuplicateDelivery("packet " + std::to_string(packet_id) +
                              " delivered twice");
    it->second.delivered = true;
    const double delay = at - it->second.sent_at;
    ++delivered_;
    delivered_bytes_ += it->second.bytes;
    delay_sum_ += delay;
    min_delay_ = std::min(min_delay_, delay);
  }

  void record_control_tx(MsgKind kind, std::uint32_t bytes) {
    ++control_tx_;
    control_bytes_ += bytes;
    ++control_by_kind_[kind];
  }

  void record_data_tx() { ++data_tx_; }
  void record_drop_queue() { ++drops_queue_; }
  void record_drop_noroute() { ++drops_noroute_; }
  void record_drop_retry() { ++drops_retry_; }
  void record_drop_ttl() { ++drops_ttl_; }
  void record_collision() { ++collisions_; }

  std::uint64_t sent() const { return sent_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t control_tx() const { return control_tx_; }
  std::uint64_t control_tx_of(MsgKind kind) const {
    auto it = control_by_kind_.find(kind);
    return it == control_by_kind_.end() ? 0 : it->second;
  }
  std::uint64_t data_tx() const { return data_tx_; }
  std::uint64_t drops_queue() const { return drops_queue_; }
  std::uint64_t drops_noroute() const { return drops_noroute_; }
  std::uint64_t drops_retry() const { return drops_retry_; }
  std::uint64_t drops_ttl() const { return drops_ttl_; }
  std::uint64_t collisions() const { return collisions_; }
  std::uint64_t control_bytes() const { return control_bytes_; }
  double min_delay_s() const { return min_delay_; }

  MetricsSummary summary(double duration_s) const {
    if (!(duration_s > 0.0))
      throw NonPositiveDuration("metrics duration must be > 0");
    MetricsSummary s;
    s.throughput_Bps = static_cast<double>(delivered_bytes_) / duration_s;
    if (delivered_ > 0) {
      s.e2ed_s = delay_sum_ / static_cast<double>(delivered_);
      s.nrl = static_cast<double>(control_tx_) / static_cast<double>(delivered_);
    }
    s.sent = sent_;
    s.delivered = delivered_;
    s.control_tx = control_tx_;
    s.drops_queue = drops_queue_;
    s.drops_noroute = drops_noroute_ + drops_ttl_;  // routing losses; MAC retry
                                                    // losses stay separate
    s.collisions = collisions_;
    return s;
  }

 private:
  struct SendInfo {
    SimTime sent_at;
    std::uint32_t bytes;
    bool delivered;
  };

  std::unordered_map<std::uint64_t, SendInfo> sends_;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t delivered_bytes_ = 0;
  double delay_sum_ = 0.0;
  double min_delay_ = std::numeric_limits<double>::infinity();

  std::uint64_t control_tx_ = 0;
  std::uint64_t control_bytes_ = 0;
  std::map<MsgKind, std::uint64_t> control_by_kind_;
  std::uint64_t data_tx_ = 0;
  std::uint64_t drops_queue_ = 0;
  std::uint64_t drops_noroute_ = 0;
  std::uint64_t drops_retry_ = 0;
  std::uint64_t drops_ttl_ = 0;
  std::uint64_t collisions_ = 0;
};

}  // namespace vanetsim
