#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "vanetsim/core/errors.hpp"

namespace vanetsim {

// Named random stream derived from a master seed.  Each consumer owns its own
// stream ("channel", "mobility", "mac.backoff", ...) so adding a new random
// consumer never perturbs the draw sequence seen by existing ones.
//
// All variate transforms are implemented on top of the mt19937_64 bit stream
// (whose output is fixed by the standard) instead of std::*_distribution,
// whose algorithms differ between standard libraries.  Identical
// (master_seed, label) therefore reproduces identical draws on any platform.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view label)
      : label_(label) {
    const std::uint64_t h = fnv1a(label);
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(h),
                      static_cast<std::uint32_t>(h >> 32)};
    gen_.seed(seq);
  }

  const std::string& label() const { return label_; }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [a, b).
  double uniform(double a, double b) {
    if (!(a < b)) throw InvalidDistParams("uniform: requires a < b");
    return a + (b - a) * uniform01();
  }

  // Uniform integer on [lo, hi], inclusive.
  std::uint32_t uniform_int(std::uint32_t lo, std::uint32_t hi) {
    if (lo > hi) throw InvalidDistParams("uniform_int: requires lo <= hi");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::uint32_t>(gen_() % span);
  }

  // Normal(mean, variance) via Box-Muller; the spare variate is cached.
  double normal(double mean, double variance) {
    if (!(variance > 0.0)) throw InvalidDistParams("normal: variance must be > 0");
    return mean + std::sqrt(variance) * standard_normal();
  }

  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Gamma(shape k, scale theta) by Marsaglia-Tsang squeeze; the k < 1 case is
  // boosted from k + 1.
  double gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
      throw InvalidDistParams("gamma: shape and scale must be > 0");
    if (shape < 1.0) {
      const double u = positive_uniform01();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = standard_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = positive_uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
  }

  // Exponential with the given rate (mean 1/rate).
  double exponential(double rate) {
    if (!(rate > 0.0)) throw InvalidDistParams("exponential: rate must be > 0");
    return -std::log(positive_uniform01()) / rate;
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    return h;
  }

 private:
  double positive_uniform01() {
    double u = uniform01();
    while (u <= 0.0) u = uniform01();
    return u;
  }

  std::string label_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace vanetsim
