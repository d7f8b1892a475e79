#pragma once

// Shared fixtures for the test binaries: closed-form oracles, graph
// utilities, and a mock-host lab that runs routing agents over an ideal
// link layer (fixed latency, no losses) so protocol logic is testable
// without the radio stack underneath.

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <variant>
#include <vector>

#include "vanetsim/vanetsim.hpp"

namespace labtest {

using namespace vanetsim;

// Closed-form counterpart of distance_cdf built on std::erf instead of
// quadrature: P(0 <= X <= r) for X ~ N(mean, variance).
inline double gaussian_cdf_oracle(const GaussianDistanceModel& m, double r) {
  const double sigma = std::sqrt(m.variance_m2);
  const double hi = 0.5 * std::erf((r - m.mean_m) / (sigma * std::sqrt(2.0)));
  const double lo = 0.5 * std::erf((0.0 - m.mean_m) / (sigma * std::sqrt(2.0)));
  return hi - lo;
}

using Graph = std::vector<std::set<NodeId>>;

inline void add_edge(Graph& g, NodeId a, NodeId b) {
  g[a].insert(b);
  g[b].insert(a);
}

// Random undirected graph; when `ensure_connected`, a random spanning chain
// is laid down first.
inline Graph random_graph(std::size_t n, double p, RngStream& rng,
                          bool ensure_connected) {
  Graph g(n);
  if (ensure_connected) {
    std::vector<NodeId> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<NodeId>(i);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j =
          rng.uniform_int(0, static_cast<std::uint32_t>(i) - 1);
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t i = 1; i < n; ++i) add_edge(g, order[i - 1], order[i]);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng.uniform01() < p)
        add_edge(g, static_cast<NodeId>(a), static_cast<NodeId>(b));
  return g;
}

// Hop counts from src; -1 marks unreachable nodes.
inline std::vector<int> bfs_distances(const Graph& g, NodeId src) {
  std::vector<int> dist(g.size(), -1);
  std::queue<NodeId> frontier;
  dist[src] = 0;
  frontier.push(src);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (const NodeId v : g[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

// Exhaustive minimum set cover over <= ~20 candidate sets; returns the
// smallest number of keys of `covers` whose union contains `targets`, or
// SIZE_MAX when no union does.
inline std::size_t min_cover_size(
    const std::map<NodeId, std::set<NodeId>>& covers,
    const std::set<NodeId>& targets) {
  std::vector<std::uint32_t> masks;
  std::map<NodeId, int> bit_of;
  int next_bit = 0;
  for (const NodeId t : targets) bit_of[t] = next_bit++;
  for (const auto& [key, reach] : covers) {
    std::uint32_t mask = 0;
    for (const NodeId t : reach)
      if (auto it = bit_of.find(t); it != bit_of.end()) mask |= 1u << it->second;
    masks.push_back(mask);
  }
  const std::uint32_t want = next_bit == 32 ? 0xFFFFFFFFu : (1u << next_bit) - 1;
  std::size_t best = static_cast<std::size_t>(-1);
  for (std::uint32_t pick = 0; pick < (1u << masks.size()); ++pick) {
    std::uint32_t got = 0;
    std::size_t size = 0;
    for (std::size_t i = 0; i < masks.size(); ++i) {
      if (pick & (1u << i)) {
        got |= masks[i];
        ++size;
      }
    }
    if ((got & want) == want && size < best) best = size;
  }
  return best;
}

// Runs N routing agents over an ideal broadcast medium: every control
// message reaches each current graph neighbor after `latency_s`, unicast
// reaches the addressee iff the link exists.  No contention, no loss.
class RoutingLab {
  struct TimerEv {
    std::uint32_t kind;
    std::uint32_t aux;
  };
  struct DeliverEv {
    NodeId from;
    ControlMessage msg;
  };
  using Ev = std::variant<TimerEv, DeliverEv>;

  class Host final : public ProtocolHost {
   public:
    Host(RoutingLab* lab, NodeId self) : lab_(lab), self_(self) {}
    void send_control(const ControlMessage& msg, NodeId mac_dst) override {
      lab_->on_send(self_, msg, mac_dst);
    }
    void schedule_timer(SimTime at, std::uint32_t kind,
                        std::uint32_t aux) override {
      lab_->engine_.schedule(std::max(at, lab_->engine_.now()), self_,
                             Ev{TimerEv{kind, aux}});
    }
    void flush_pending(NodeId dest) override {
      lab_->flushes.push_back({self_, dest});
    }
    void drop_pending(NodeId dest) override {
      lab_->drops.push_back({self_, dest});
    }

   private:
    RoutingLab* lab_;
    NodeId self_;
  };

 public:
  RoutingLab(std::size_t n, ProtocolName proto) : graph_(n) {
    for (std::size_t i = 0; i < n; ++i)
      hosts_.push_back(std::make_unique<Host>(this, static_cast<NodeId>(i)));
    for (std::size_t i = 0; i < n; ++i) {
      const NodeId id = static_cast<NodeId>(i);
      const double offset = 0.011 + 0.037 * static_cast<double>(i);
      const ProtocolParams pp = preset_params(proto).params;
      if (const auto* d = std::get_if<DsdvParams>(&pp)) {
        agents_.push_back(
            std::make_unique<DsdvAgent>(id, *d, *hosts_[i], offset));
      } else if (const auto* o = std::get_if<OlsrParams>(&pp)) {
        agents_.push_back(
            std::make_unique<OlsrAgent>(id, *o, *hosts_[i], offset));
      } else {
        agents_.push_back(std::make_unique<DymoAgent>(
            id, std::get<DymoParams>(pp), *hosts_[i]));
      }
    }
    for (auto& a : agents_) a->start(0.0);
  }

  void link(NodeId a, NodeId b) { add_edge(graph_, a, b); }
  void set_graph(const Graph& g) { graph_ = g; }

  // Removes the edge and gives both ends the link-layer failure signal.
  void break_link(NodeId a, NodeId b) {
    graph_[a].erase(b);
    graph_[b].erase(a);
    agents_[a]->handle_link_break(b, engine_.now());
    agents_[b]->handle_link_break(a, engine_.now());
  }

  void run_until(SimTime t) {
    engine_.run_until(t, [this](SimTime at, NodeId target, Ev& ev) {
      if (const auto* timer = std::get_if<TimerEv>(&ev)) {
        agents_[target]->handle_timer(timer->kind, timer->aux, at);
      } else {
        const auto& del = std::get<DeliverEv>(ev);
        agents_[target]->handle_control(del.msg, del.from, at);
      }
    });
  }

  RoutingProtocol& agent(NodeId i) { return *agents_[i]; }
  RouteTable snapshot(NodeId i) {
    return agents_[i]->table_snapshot(engine_.now());
  }
  SimTime now() const { return engine_.now(); }

  std::uint64_t total_sent = 0;
  std::map<MsgKind, std::uint64_t> sent_by_kind;
  std::vector<std::pair<NodeId, NodeId>> flushes;  // (node, dest)
  std::vector<std::pair<NodeId, NodeId>> drops;    // (node, dest)
  double latency_s = 0.001;

 private:
  void on_send(NodeId from, const ControlMessage& msg, NodeId mac_dst) {
    ++total_sent;
    ++sent_by_kind[msg.kind()];
    const SimTime arrive = engine_.now() + latency_s;
    if (mac_dst == kBroadcastId) {
      for (const NodeId nb : graph_[from])
        engine_.schedule(arrive, nb, Ev{DeliverEv{from, msg}});
    } else if (graph_[from].count(mac_dst)) {
      engine_.schedule(arrive, mac_dst, Ev{DeliverEv{from, msg}});
    }
  }

  Graph graph_;
  Engine<Ev> engine_;
  std::vector<std::unique_ptr<Host>> hosts_;
  std::vector<std::unique_ptr<RoutingProtocol>> agents_;
};

// Next-hop chain walk; returns hop count to dest or -1 when the walk dies
// or exceeds `limit`.
inline int walk_route(RoutingLab& lab, NodeId src, NodeId dst, int limit) {
  NodeId cur = src;
  for (int hops = 0; hops <= limit; ++hops) {
    if (cur == dst) return hops;
    const auto next = lab.agent(cur).route_lookup(dst, lab.now());
    if (!next) return -1;
    cur = *next;
  }
  return -1;
}

}  // namespace labtest
