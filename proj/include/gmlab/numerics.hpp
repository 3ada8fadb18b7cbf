#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gmlab {

using Rng = std::mt19937_64;

/// Hurwitz zeta  sum_{k>=0} (q+k)^{-s}  for s > 1, q > 0, by Euler-Maclaurin.
/// Absolute accuracy is near machine precision relative to the result.
double hurwitz_zeta(double s, double q);

inline double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

/// sum_{k>=n} k^{-s}, n >= 1.
inline double power_tail(double s, double n) { return hurwitz_zeta(s, n); }

/// Uniform double in [0,1) from the top 53 bits; bit-reproducible across platforms.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Deterministic generator for one path of a seeded experiment.
Rng stream_rng(std::uint64_t master_seed, std::uint64_t path_index);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

/// Linear-interpolated quantile (type 7) of an unsorted sample; q in [0,1].
double quantile(std::vector<double> values, double q);

inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

}  // namespace gmlab
