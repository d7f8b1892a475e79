#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "vanetsim/metrics/metrics.hpp"
#include "vanetsim/scenario/config.hpp"
#include "vanetsim/sim/simulation.hpp"

namespace vanetsim {

// One metrics row plus bookkeeping; deterministic for a fixed (config, seed).
struct RunResult {
  ProtocolName protocol;
  MacKind mac_variant;
  std::uint32_t n_nodes = 0;
  double speed_mps = 0.0;
  std::uint64_t seed = 0;
  MetricsSummary metrics;
  double wall_s = 0.0;
  std::uint64_t events = 0;
};

inline RunResult run_scenario(const ScenarioConfig& cfg,
                              std::ostream* trace = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  Simulation sim(cfg.sim);
  sim.trace = trace;
  RunResult r;
  r.metrics = sim.run();
  r.protocol = cfg.sim.protocol;
  r.mac_variant = cfg.sim.mac_kind;
  r.n_nodes = cfg.sim.n_nodes;
  r.speed_mps = cfg.sim.speed_mps;
  r.seed = cfg.sim.seed;
  r.events = sim.events_processed();
  r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                 .count();
  return r;
}

// One sweep point: node count and speed.
struct SweepPoint {
  std::uint32_t n_nodes;
  double speed_mps;
};

enum class SweepFamily { Density, Mobility };

inline const char* to_string(SweepFamily f) {
  return f == SweepFamily::Density ? "density" : "mobility";
}

// Density varies the node count at a fixed 15 m/s; mobility varies speed at a
// fixed 50-node density.
inline std::vector<SweepPoint> sweep_points(SweepFamily family) {
  if (family == SweepFamily::Density)
    return {{25, 15.0}, {50, 15.0}, {75, 15.0}, {100, 15.0}};
  return {{50, 2.0}, {50, 7.0}, {50, 15.0}, {50, 30.0}};
}

inline std::vector<ProtocolName> all_protocols() {
  return {ProtocolName::DSDV, ProtocolName::MOD_DSDV, ProtocolName::OLSR,
          ProtocolName::MOD_OLSR, ProtocolName::DYMO, ProtocolName::MOD_DYMO};
}

// Cartesian product of the axes, run sequentially; per-rep seeds derive from
// the base seed by addition, and rows come back in a fixed sort order so the
// emitted CSV is reproducible.
inline std::vector<RunResult> run_matrix(const ScenarioConfig& base,
                                         const std::vector<ProtocolName>& protocols,
                                         const std::vector<MacKind>& macs,
                                         const std::vector<SweepPoint>& points,
                                         std::uint32_t reps) {
  if (reps < 1) throw InvalidConfig("reps must be >= 1");
  std::vector<RunResult> rows;
  rows.reserve(protocols.size() * macs.size() * points.size() * reps);
  for (const MacKind mac : macs) {
    for (const ProtocolName proto : protocols) {
      for (const SweepPoint& pt : points) {
        for (std::uint32_t rep = 0; rep < reps; ++rep) {
          ScenarioConfig cfg = base;
          cfg.sim.protocol = proto;
          cfg.sim.mac_kind = mac;
          cfg.sim.n_nodes = pt.n_nodes;
          cfg.sim.speed_mps = pt.speed_mps;
          cfg.sim.seed = base.sim.seed + rep;
          // Axis values that move away from the base variant fall back to
          // presets; the base's own variant keeps any explicit overrides.
          if (proto != base.sim.protocol) cfg.sim.protocol_params.reset();
          if (mac != base.sim.mac_kind) {
            cfg.sim.phy.reset();
            cfg.sim.mac.reset();
            cfg.sim.nakagami.reset();
          }
          rows.push_back(run_scenario(cfg));
        }
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const RunResult& a, const RunResult& b) {
    return std::make_tuple(static_cast<int>(a.mac_variant),
                           static_cast<int>(a.protocol), a.n_nodes, a.speed_mps,
                           a.seed) < std::make_tuple(static_cast<int>(b.mac_variant),
                                                     static_cast<int>(b.protocol),
                                                     b.n_nodes, b.speed_mps,
                                                     b.seed);
  });
  return rows;
}

inline std::vector<RunResult> run_sweep(const ScenarioConfig& base,
                                        SweepFamily family, std::uint32_t reps) {
  return run_matrix(base, all_protocols(), {MacKind::Dot11, MacKind::Dot11p},
                    sweep_points(family), reps);
}

}  // namespace vanetsim
