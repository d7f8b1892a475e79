#pragma once

#include <cmath>
#include <vector>

#include "vanetsim/core/errors.hpp"
#include "vanetsim/core/rng.hpp"

namespace vanetsim {

// Epoch-based 2D mobility abstraction used to cross-validate the Gaussian
// distance model: a node's motion is a sequence of random intervals (epochs),
// each with a fresh speed and heading, and we sample its signed perpendicular
// offset from the strip line at a fixed cadence.
struct EpochModelParams {
  double epoch_rate = 1.0;        // epochs per second (exponential durations)
  double speed_min_mps = 0.0;
  double speed_max_mps = 0.0;     // speed_min == speed_max is the degenerate case
  double heading_sigma_rad = 0.0; // stddev of the per-epoch heading change
  double initial_distance_m = 0.0;
  double cadence_s = 0.1;         // sampling interval

  void validate() const {
    if (!(epoch_rate > 0.0)) throw InvalidParams("epochs: epoch_rate must be > 0");
    if (speed_min_mps < 0.0 || speed_max_mps < speed_min_mps)
      throw InvalidParams("epochs: need 0 <= speed_min <= speed_max");
    if (heading_sigma_rad < 0.0)
      throw InvalidParams("epochs: heading_sigma must be >= 0");
    if (!(cadence_s > 0.0)) throw InvalidParams("epochs: cadence must be > 0");
  }
};

// Simulates one trajectory over [0, horizon] and returns the distance-from-
// strip samples at 0, cadence, 2*cadence, ...  (floor(horizon/cadence) + 1
// samples).  Piecewise constant velocity; each epoch draws a fresh speed from
// [speed_min, speed_max] and perturbs the heading by N(0, sigma^2).
inline std::vector<double> simulate_epochs(const EpochModelParams& params,
                                           double horizon_s, RngStream& rng) {
  params.validate();
  if (!(horizon_s > 0.0)) throw InvalidParams("simulate_epochs: horizon must be > 0");

  const std::size_t n_samples =
      static_cast<std::size_t>(std::floor(horizon_s / params.cadence_s)) + 1;
  std::vector<double> samples;
  samples.reserve(n_samples);

  double y = params.initial_distance_m;  // signed offset from the strip line
  double heading = rng.uniform01() * 2.0 * M_PI;
  double speed = params.speed_min_mps == params.speed_max_mps
                     ? params.speed_min_mps
                     : rng.uniform(params.speed_min_mps, params.speed_max_mps);
  double epoch_ends = rng.exponential(params.epoch_rate);

  double t = 0.0;
  samples.push_back(y);
  for (std::size_t i = 1; i < n_samples; ++i) {
    double target = static_cast<double>(i) * params.cadence_s;
    while (epoch_ends < target) {
      y += speed * std::sin(heading) * (epoch_ends - t);
      t = epoch_ends;
      if (params.heading_sigma_rad > 0.0)
        heading += rng.normal(0.0, params.heading_sigma_rad * params.heading_sigma_rad);
      speed = params.speed_min_mps == params.speed_max_mps
                  ? params.speed_min_mps
                  : rng.uniform(params.speed_min_mps, params.speed_max_mps);
      epoch_ends += rng.exponential(params.epoch_rate);
    }
    y += speed * std::sin(heading) * (target - t);
    t = target;
    samples.push_back(y);
  }
  return samples;
}

}  // namespace vanetsim
