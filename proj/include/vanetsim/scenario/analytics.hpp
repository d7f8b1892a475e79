#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <vector>

#include "vanetsim/core/errors.hpp"
#include "vanetsim/core/rng.hpp"
#include "vanetsim/math/integrate.hpp"
#include "vanetsim/mobility/gaussian_model.hpp"

namespace vanetsim {

struct AnalyticsRow {
  double r = 0.0;
  double pdf = 0.0;
  double cdf = 0.0;
  double efficiency = 0.0;  // always exactly 100 x cdf
};

// Evenly spaced evaluation of the distance model on [0, r_max].  The cdf
// column accumulates per-segment quadrature instead of re-integrating from
// zero each row: increments of a nonnegative density never go below zero,
// so the column is monotone even where quadrature noise would otherwise
// outweigh a vanishing tail increment.
inline std::vector<AnalyticsRow> analytics_table(const GaussianDistanceModel& model,
                                                 double r_max,
                                                 std::uint32_t steps) {
  if (!(r_max > 0.0)) throw InvalidParams("analytics: r_max must be > 0");
  if (steps < 2) throw InvalidParams("analytics: need at least 2 steps");
  std::vector<AnalyticsRow> rows;
  rows.reserve(steps);
  double cdf = 0.0;
  double prev_r = 0.0;
  for (std::uint32_t i = 0; i < steps; ++i) {
    AnalyticsRow row;
    row.r = r_max * static_cast<double>(i) / static_cast<double>(steps - 1);
    row.pdf = distance_pdf(model, row.r);
    if (i > 0) {
      const double inc =
          integrate([&](double z) { return distance_pdf(model, z); }, prev_r,
                    row.r, 1e-12);
      cdf = std::min(cdf + std::max(inc, 0.0), 1.0);
    }
    row.cdf = cdf;
    row.efficiency = 100.0 * row.cdf;
    prev_r = row.r;
    rows.push_back(row);
  }
  return rows;
}

// Empirical P(0 <= X <= r) per table row from normal draws; cross-checks the
// quadrature column.
inline std::vector<double> analytics_mc_column(const GaussianDistanceModel& model,
                                               const std::vector<AnalyticsRow>& rows,
                                               std::uint32_t n_samples,
                                               RngStream& rng) {
  if (n_samples == 0) throw InvalidParams("analytics: need samples");
  std::vector<double> samples;
  samples.reserve(n_samples);
  for (std::uint32_t i = 0; i < n_samples; ++i)
    samples.push_back(rng.normal(model.mean_m, model.variance_m2));
  std::vector<double> out;
  out.reserve(rows.size());
  for (const AnalyticsRow& row : rows) {
    std::uint64_t hits = 0;
    for (const double s : samples)
      if (s >= 0.0 && s <= row.r) ++hits;
    out.push_back(static_cast<double>(hits) / static_cast<double>(n_samples));
  }
  return out;
}

inline void print_analytics_table(const std::vector<AnalyticsRow>& rows,
                                  const std::vector<double>* mc,
                                  std::ostream& out) {
  out << "r_m,pdf,cdf,efficiency_pct";
  if (mc) out << ",mc_cdf";
  out << '\n';
  char buf[160];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const AnalyticsRow& r = rows[i];
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%.6g", r.r, r.pdf, r.cdf,
                  r.efficiency);
    out << buf;
    if (mc) {
      std::snprintf(buf, sizeof(buf), ",%.6g", (*mc)[i]);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace vanetsim
