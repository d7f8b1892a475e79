#pragma once

#include <cstdint>
#include <deque>

#include "vanetsim/core/errors.hpp"
#include "vanetsim/core/rng.hpp"
#include "vanetsim/net/frame.hpp"

namespace vanetsim {

enum class MacKind { Dot11, Dot11p };

struct MacParams {
  MacKind variant = MacKind::Dot11;
  double slot_time_s = 20e-6;
  double sifs_s = 10e-6;
  double difs_s = 50e-6;
  std::uint32_t cw_min = 31;
  std::uint32_t cw_max = 1023;
  double preamble_plus_header_time_s = 192e-6;
  double ack_timeout_s = 400e-6;
  std::uint32_t retry_limit = 7;
  std::uint32_t queue_capacity = 50;

  void validate() const {
    if (cw_min > cw_max) throw InvalidConfig("mac: cw_min must be <= cw_max");
    if (!(slot_time_s > 0.0) || !(sifs_s > 0.0) || !(difs_s > 0.0) ||
        !(preamble_plus_header_time_s > 0.0) || !(ack_timeout_s > 0.0))
      throw InvalidConfig("mac: all durations must be > 0");
    if (queue_capacity < 1) throw InvalidConfig("mac: queue capacity must be >= 1");
  }
};

// 802.11 DSSS timing vs 802.11p 10 MHz OFDM timing.  Standard constants, all
// overridable from config.
inline MacParams mac_preset(MacKind kind) {
  MacParams m;
  m.variant = kind;
  if (kind == MacKind::Dot11) {
    m.slot_time_s = 20e-6;
    m.sifs_s = 10e-6;
    m.difs_s = 50e-6;  // sifs + 2 slots
    m.cw_min = 31;
    m.cw_max = 1023;
    m.preamble_plus_header_time_s = 192e-6;  // long PLCP preamble + header
    m.ack_timeout_s = 400e-6;
  } else {
    m.slot_time_s = 13e-6;
    m.sifs_s = 32e-6;
    m.difs_s = 58e-6;
    m.cw_min = 15;
    m.cw_max = 1023;
    m.preamble_plus_header_time_s = 40e-6;  // OFDM preamble + SIGNAL, 10 MHz
    m.ack_timeout_s = 120e-6;
  }
  return m;
}

// Time on air: PHY preamble/header plus the payload at the data rate.
inline double frame_airtime(const MacParams& mac, double phy_rate_bps,
                            std::uint32_t payload_bytes) {
  if (payload_bytes == 0) throw InvalidParams("frame_airtime: payload must be > 0");
  return mac.preamble_plus_header_time_s +
         static_cast<double>(payload_bytes) * 8.0 / phy_rate_bps;
}

// Binary exponential backoff: uniform slot count in [0, CW] with
// CW = min(cw_max, (cw_min + 1) * 2^attempt - 1).
inline std::uint32_t backoff_slots(const MacParams& mac, std::uint32_t attempt,
                                   RngStream& rng) {
  std::uint64_t cw = (static_cast<std::uint64_t>(mac.cw_min) + 1)
                     << std::min<std::uint32_t>(attempt, 31);
  cw = std::min<std::uint64_t>(cw - 1, mac.cw_max);
  return rng.uniform_int(0, static_cast<std::uint32_t>(cw));
}

enum class EnqueueResult { Accepted, Dropped };

// Drop-tail queue with two lanes; routing control frames strictly precede
// data frames on dequeue (the PriQueue discipline).
class TxQueue {
 public:
  explicit TxQueue(std::uint32_t capacity = 50) : capacity_(capacity) {}

  EnqueueResult enqueue(FramePtr f) {
    if (size() >= capacity_) return EnqueueResult::Dropped;
    if (f->kind == FrameKind::RoutingControl)
      control_.push_back(std::move(f));
    else
      data_.push_back(std::move(f));
    return EnqueueResult::Accepted;
  }

  bool empty() const { return control_.empty() && data_.empty(); }
  std::size_t size() const { return control_.size() + data_.size(); }
  std::size_t control_size() const { return control_.size(); }
  std::size_t data_size() const { return data_.size(); }
  std::uint32_t capacity() const { return capacity_; }

  const FramePtr& front() const {
    return control_.empty() ? data_.front() : control_.front();
  }

  FramePtr pop() {
    FramePtr f;
    if (!control_.empty()) {
      f = std::move(control_.front());
      control_.pop_front();
    } else {
      f = std::move(data_.front());
      data_.pop_front();
    }
    return f;
  }

 private:
  std::uint32_t capacity_;
  std::deque<FramePtr> control_;
  std::deque<FramePtr> data_;
};

}  // namespace vanetsim
