#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "vanetsim/core/errors.hpp"
#include "vanetsim/math/integrate.hpp"

namespace vanetsim {

// Gaussian model of a node's distance from the highway strip: the distance
// X(t) is normal with mean `mean_m` and variance `variance_m2`.  The density
// is supported on all reals while physical distance is not; distance_cdf
// integrates from 0 and reports the possibly-sub-unit mass rather than
// renormalizing.  normalization_mass() exposes the truncation as a
// diagnostic.
struct GaussianDistanceModel {
  double mean_m = 0.0;       // epsilon
  double variance_m2 = 1.0;  // theta
};

inline double distance_pdf(const GaussianDistanceModel& model, double r) {
  if (!(model.variance_m2 > 0.0))
    throw NonPositiveVariance("distance_pdf: variance must be > 0");
  const double d = r - model.mean_m;
  return std::exp(-d * d / (2.0 * model.variance_m2)) /
         std::sqrt(2.0 * M_PI * model.variance_m2);
}

// Total pdf mass over [max(0, mean - 8 sigma), mean + 8 sigma]; equals 1 up
// to quadrature tolerance unless the truncation at 0 bites.
inline double normalization_mass(const GaussianDistanceModel& model,
                                 double tol = 1e-9) {
  if (!(model.variance_m2 > 0.0))
    throw NonPositiveVariance("normalization_mass: variance must be > 0");
  const double sigma = std::sqrt(model.variance_m2);
  const double lo = std::max(0.0, model.mean_m - 8.0 * sigma);
  const double hi = model.mean_m + 8.0 * sigma;
  if (hi <= lo) return 0.0;
  return integrate([&](double z) { return distance_pdf(model, z); }, lo, hi, tol);
}

// P(r) = integral of the pdf over [0, r], by adaptive Simpson quadrature.
// The tight default tolerance keeps the result within 1e-9 of the exact
// value even for wide models; the integrand is cheap enough not to care.
inline double distance_cdf(const GaussianDistanceModel& model, double r,
                           double tol = 1e-12) {
  if (!(model.variance_m2 > 0.0))
    throw NonPositiveVariance("distance_cdf: variance must be > 0");
  if (r < 0.0) throw NegativeRadius("distance_cdf: radius must be >= 0");
  if (r == 0.0) return 0.0;
  // Clip the quadrature interval to where the density is non-negligible;
  // beyond mean +- 9 sigma the integrand is below the tolerance everywhere.
  const double sigma = std::sqrt(model.variance_m2);
  const double lo = std::max(0.0, model.mean_m - 9.0 * sigma);
  const double hi = std::min(r, model.mean_m + 9.0 * sigma);
  if (hi <= lo) return 0.0;  // [0, r] lies entirely in a far tail
  const double mass =
      integrate([&](double z) { return distance_pdf(model, z); }, lo, hi, tol);
  return std::min(mass, 1.0);
}

// Efficiency of communication at range r, in percent.  A pure scaling of the
// cdf: both columns of the analytics table come from the same evaluation.
inline double efficiency(const GaussianDistanceModel& model, double r) {
  return 100.0 * distance_cdf(model, r);
}

// Fits (mean, unbiased variance) to observed distance samples.
inline GaussianDistanceModel fit_gaussian(std::span<const double> samples) {
  if (samples.size() < 2)
    throw InsufficientSamples("fit_gaussian: need at least 2 samples");
  double sum = 0.0;
  for (const double s : samples) sum += s;
  const double mean = sum / static_cast<double>(samples.size());
  double ss = 0.0;
  for (const double s : samples) {
    const double d = s - mean;
    ss += d * d;
  }
  const double variance = ss / static_cast<double>(samples.size() - 1);
  return GaussianDistanceModel{mean, variance};
}

}  // namespace vanetsim
