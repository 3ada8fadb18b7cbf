#pragma once

#include <cstdint>
#include <optional>

#include "gmlab/gfunction.hpp"

namespace gmlab {

/// |1 - sum of g(sigma x) over the first m enumerated symbols| minus the certified tail and
/// evaluation error, clamped at 0. A positive value means g is not normalized at x.
/// m is ignored for finite supports.
double normalization_residual(const GFunction& g, const Context& x, std::size_t m,
                              double tol = kDefaultTolerance);

/// Sampled lower bound paired with the analytic upper bound, when one exists. Never a point estimate.
struct Bracket {
  double lower = 0.0;
  std::optional<double> upper;
};

/// var_n g: sup |g(sigma x) - g(sigma y)| over x, y agreeing on context coordinates 0..n-1.
Bracket var_estimate(const GFunction& g, std::size_t n, std::size_t budget, std::uint64_t seed);

/// (svar_n sqrt g)^2 = sup_x sum_sigma (var_{n+1} sqrt g(sigma, x))^2, where the inner variation
/// keeps context coordinates 0..n. Both ends of the bracket are squared quantities.
Bracket svar_sq_estimate(const GFunction& g, std::size_t n, std::size_t budget, std::uint64_t seed);

struct PositivityReport {
  bool zero_found = false;
  Symbol symbol = 0;
  std::optional<Context> context;
  double value = 0.0;
  std::size_t checked = 0;
};

/// Searches corner and sampled contexts for g(sigma x) <= threshold.
PositivityReport positivity_probe(const GFunction& g, std::size_t budget, std::uint64_t seed,
                                  double threshold = 0.0);

}  // namespace gmlab
