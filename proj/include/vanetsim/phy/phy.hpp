#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "vanetsim/core/errors.hpp"
#include "vanetsim/core/rng.hpp"

namespace vanetsim {

enum class PhyKind { Dot11, Dot11p };

inline const char* to_string(PhyKind k) {
  return k == PhyKind::Dot11 ? "802.11" : "802.11p";
}

struct PhyParams {
  PhyKind preset = PhyKind::Dot11;
  double carrier_freq_hz = 2.4e9;
  double tx_power_dbm = 16.0;
  double data_rate_bps = 2e6;
  double rx_threshold_dbm = -72.0;
  double cs_threshold_dbm = -82.0;
  double noise_floor_dbm = -96.0;

  void validate() const {
    if (!(data_rate_bps > 0.0)) throw InvalidConfig("phy: data rate must be > 0");
    if (cs_threshold_dbm > rx_threshold_dbm)
      throw InvalidConfig("phy: cs threshold must not exceed rx threshold");
  }
};

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// Distance-segmented Nakagami parameters in the style of the classic highway
// measurement profiles: fading gets harsher (m drops) and path loss steeper
// (gamma grows) beyond the breakpoints.  The last entry of each list covers
// all remaining distance.
struct NakagamiParams {
  struct Segment {
    double max_distance_m;  // segment covers distances up to this value
    double value;
  };
  std::vector<Segment> shape_m{{80.0, 1.5},
                               {std::numeric_limits<double>::infinity(), 0.75}};
  std::vector<Segment> path_loss_exponent{
      {200.0, 1.9}, {std::numeric_limits<double>::infinity(), 3.8}};
  double ref_distance_m = 1.0;
  double ref_loss_db = 40.0;  // free-space loss at ref_distance for the carrier

  void validate() const {
    if (!(ref_distance_m > 0.0))
      throw InvalidConfig("nakagami: reference distance must be > 0");
    auto check = [](const std::vector<Segment>& segs, bool is_shape) {
      if (segs.empty()) throw InvalidConfig("nakagami: empty segment list");
      double prev = 0.0;
      for (const Segment& s : segs) {
        if (!(s.max_distance_m > prev))
          throw InvalidConfig("nakagami: breakpoints must be strictly increasing");
        if (is_shape && s.value < 0.5)
          throw InvalidShape("nakagami: shape m must be >= 0.5");
        prev = s.max_distance_m;
      }
    };
    check(shape_m, true);
    check(path_loss_exponent, false);
  }

  double shape_at(double d) const {
    for (const Segment& s : shape_m)
      if (d <= s.max_distance_m) return s.value;
    return shape_m.back().value;
  }
};

// Free-space path loss at distance d for wavelength lambda, in dB.
inline double free_space_loss_db(double carrier_freq_hz, double d) {
  const double lambda = 299792458.0 / carrier_freq_hz;
  return 20.0 * std::log10(4.0 * M_PI * d / lambda);
}

// Mean received power: log-distance model with a piecewise path-loss
// exponent, accumulated segment by segment so the curve stays continuous
// across breakpoints.
inline double mean_rx_power(const PhyParams& phy, const NakagamiParams& naka,
                            double d) {
  if (!(d > 0.0)) throw NonPositiveDistance("mean_rx_power: distance must be > 0");
  double loss_db = naka.ref_loss_db;
  double prev = naka.ref_distance_m;
  if (d > prev) {
    for (const NakagamiParams::Segment& seg : naka.path_loss_exponent) {
      const double seg_end = std::min(d, seg.max_distance_m);
      if (seg_end > prev) {
        loss_db += 10.0 * seg.value * std::log10(seg_end / prev);
        prev = seg_end;
      }
      if (d <= seg.max_distance_m) break;
    }
  }
  return phy.tx_power_dbm - loss_db;
}

// Nakagami-m fast fading: received power is gamma distributed with shape m
// and mean equal to the deterministic mean power.
inline double sample_rx_power(double mean_dbm, double shape_m, RngStream& rng) {
  if (!(shape_m >= 0.5)) throw InvalidShape("sample_rx_power: m must be >= 0.5");
  const double mean_mw = dbm_to_mw(mean_dbm);
  return mw_to_dbm(rng.gamma(shape_m, mean_mw / shape_m));
}

enum class Reception { Received, CarrierOnly, Undetected, Collided };

// Threshold receiver with a binary interference rule: a decodable frame that
// temporally overlaps any other sensed transmission is lost.
inline Reception reception_decision(double sample_dbm, const PhyParams& phy,
                                    bool concurrent_interference) {
  if (sample_dbm < phy.cs_threshold_dbm) return Reception::Undetected;
  if (sample_dbm < phy.rx_threshold_dbm) return Reception::CarrierOnly;
  return concurrent_interference ? Reception::Collided : Reception::Received;
}

// Parameter presets for the two MAC/PHY families under comparison.  The
// 802.11 numbers pin the 2.4 GHz / 2 Mbit/s DSSS setup; 802.11p uses the
// 5.9 GHz DSRC band with a 10 MHz OFDM channel at the 6 Mbit/s default rate
// and tighter thresholds.  Every field can be overridden in the scenario
// config.
inline PhyParams phy_preset(PhyKind kind) {
  PhyParams p;
  p.preset = kind;
  if (kind == PhyKind::Dot11) {
    p.carrier_freq_hz = 2.4e9;
    p.tx_power_dbm = 16.0;
    p.data_rate_bps = 2e6;
    p.rx_threshold_dbm = -72.0;
    p.cs_threshold_dbm = -82.0;
    p.noise_floor_dbm = -96.0;
  } else {
    p.carrier_freq_hz = 5.9e9;
    p.tx_power_dbm = 20.0;
    p.data_rate_bps = 6e6;
    p.rx_threshold_dbm = -77.0;
    p.cs_threshold_dbm = -87.0;
    p.noise_floor_dbm = -99.0;
  }
  return p;
}

// Nakagami defaults with the reference loss tied to the preset's carrier.
inline NakagamiParams nakagami_preset(const PhyParams& phy) {
  NakagamiParams n;
  n.ref_loss_db = free_space_loss_db(phy.carrier_freq_hz, n.ref_distance_m);
  return n;
}

}  // namespace vanetsim
