#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "vanetsim/core/errors.hpp"

namespace vanetsim {

using SimTime = double;  // seconds of virtual time
using NodeId = std::uint32_t;

inline constexpr NodeId kBroadcastId = 0xFFFFFFFFu;
inline constexpr NodeId kSystemTarget = 0xFFFFFFFEu;

struct EventHandle {
  std::uint64_t seq = 0;
};

// Discrete-event engine: a (fire_at, seq) ordered queue plus the virtual
// clock.  seq is a global insertion counter, so simultaneous events dequeue
// in FIFO order and every run has one strict total order over its events.
template <typename Payload>
class Engine {
 public:
  EventHandle schedule(SimTime at, NodeId target, Payload payload) {
    if (!std::isfinite(at) || at < now_)
      throw SchedulingInPast("schedule: fire time " + std::to_string(at) +
                             " precedes current time " + std::to_string(now_));
    const std::uint64_t seq = next_seq_++;
    heap_.push_back(Item{at, seq, target, std::move(payload)});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
    return EventHandle{seq};
  }

  void cancel(EventHandle h) { cancelled_.insert(h.seq); }

  bool empty() const { return heap_.size() <= cancelled_.size(); }

  // Processes every event with fire_at <= t_end in (fire_at, seq) order and
  // advances the clock to t_end.  Returns the number of events delivered.
  template <typename Handler>
  std::size_t run_until(SimTime t_end, Handler&& handler) {
    if (!std::isfinite(t_end) || t_end < now_)
      throw SchedulingInPast("run_until: t_end precedes current time");
    std::size_t delivered = 0;
    while (!heap_.empty() && heap_.front().at <= t_end) {
      std::pop_heap(heap_.begin(), heap_.end(), Later{});
      Item item = std::move(heap_.back());
      heap_.pop_back();
      if (auto it = cancelled_.find(item.seq); it != cancelled_.end()) {
        cancelled_.erase(it);
        continue;
      }
      now_ = item.at;
      mix_trace(item.at, item.seq);
      ++processed_;
      ++delivered;
      handler(item.at, item.target, item.payload);
    }
    now_ = t_end;
    return delivered;
  }

  SimTime now() const { return now_; }
  std::uint64_t processed() const { return processed_; }

  // Order-sensitive FNV-1a hash over (fire_at, seq) of processed events; two
  // runs with the same seed and scenario must agree on it.
  std::uint64_t trace_hash() const { return trace_hash_; }

 private:
  struct Item {
    SimTime at;
    std::uint64_t seq;
    NodeId target;
    Payload payload;
  };

  struct Later {
    bool operator()(const Item& a, const Item& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  void mix_trace(SimTime at, std::uint64_t seq) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof at);
    std::memcpy(&bits, &at, sizeof bits);
    trace_hash_ = (trace_hash_ ^ bits) * 0x100000001b3ull;
    trace_hash_ = (trace_hash_ ^ seq) * 0x100000001b3ull;
  }

  std::vector<Item> heap_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t processed_ = 0;
  std::uint64_t trace_hash_ = 0xcbf29ce484222325ull;
  SimTime now_ = 0.0;
};

}  // namespace vanetsim
