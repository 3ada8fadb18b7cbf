#include "gmlab/numerics.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>

#include "gmlab/error.hpp"

namespace gmlab {

namespace {

// B_{2j} / (2j)!
constexpr std::array<double, 10> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
};

}  // namespace

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) {
    throw Error(ErrorKind::kInvalidDistribution, "hurwitz_zeta requires s > 1 and q > 0");
  }
  // Direct terms until the shifted argument is large enough for the asymptotic correction.
  constexpr int kDirect = 12;
  double sum = 0.0;
  double a = q;
  int shift = 0;
  if (a < kDirect) {
    shift = kDirect - static_cast<int>(std::floor(a));
    // Sum smallest terms last is irrelevant here: there are at most kDirect of them.
    for (int k = 0; k < shift; ++k) sum += std::pow(q + k, -s);
    a = q + shift;
  }
  double tail = std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  // Euler-Maclaurin: sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) a^{-s-2j+1}
  double rising = s;            // s (s+1) ... (s+2j-2)
  double power = std::pow(a, -s - 1.0);
  const double inv_a2 = 1.0 / (a * a);
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const double term = kBernoulliOverFactorial[j] * rising * power;
    tail += term;
    if (std::abs(term) < 1e-17 * std::abs(tail)) break;
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    power *= inv_a2;
  }
  return sum + tail;
}

Rng stream_rng(std::uint64_t master_seed, std::uint64_t path_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) return {};
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace gmlab
