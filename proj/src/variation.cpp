#include "gmlab/variation.hpp"

#include <algorithm>
#include <cmath>

namespace gmlab {

namespace {

constexpr double kProbeTolerance = 1e-12;

// Bound on |sqrt(v) - sqrt(true value)| when |v - true value| <= e.
double sqrt_error(double v, double e) {
  if (e <= 0.0) return 0.0;
  if (v <= e) return std::sqrt(2.0 * e);
  return e / (std::sqrt(v - e) + std::sqrt(v));
}

std::vector<Symbol> probe_symbols(const GFunction& g, const Context& x) {
  if (auto support = g.finite_support(x)) return *support;
  // lower-bound probe: symbols far in the tail carry negligible oscillation
  DistributionOptions options;
  options.tol = kProbeTolerance;
  options.cutoff = 1e-6;
  return g.distribution(x, options).symbols;
}

}  // namespace

double normalization_residual(const GFunction& g, const Context& x, std::size_t m, double tol) {
  double sum = 0.0;
  double err = 0.0;
  double tail = 0.0;
  if (const auto support = g.finite_support(x)) {
    for (Symbol s : *support) {
      const auto e = g.evaluate(s, x, tol);
      sum += e.value;
      err += e.error;
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      const auto e = g.evaluate_or_zero(g.alphabet().at(i), x, tol);
      sum += e.value;
      err += e.error;
    }
    tail = g.tail_mass_bound(x, m);
  }
  const double deficit = 1.0 - sum - tail - err;
  const double excess = sum - 1.0 - err;
  return std::max({0.0, deficit, excess});
}

Bracket var_estimate(const GFunction& g, std::size_t n, std::size_t budget, std::uint64_t seed) {
  Rng rng = stream_rng(seed, n);
  Bracket out;
  out.upper = g.var_bound(n);
  const auto corners = g.corner_contexts();
  for (std::size_t i = 0; i < budget; ++i) {
    const Context x = i < corners.size() ? corners[i] : g.random_context(rng, n + 1 + rng() % 8);
    const Context y = g.random_extension(rng, x, n, 1 + rng() % 8);
    const auto symbols = probe_symbols(g, x);
    if (symbols.empty()) continue;
    const Symbol sigma = symbols[rng() % std::min<std::size_t>(symbols.size(), 8)];
    if (!g.allowed(sigma, y)) continue;
    const auto ex = g.evaluate(sigma, x, kProbeTolerance);
    const auto ey = g.evaluate(sigma, y, kProbeTolerance);
    out.lower = std::max(out.lower, std::abs(ex.value - ey.value) - ex.error - ey.error);
  }
  return out;
}

Bracket svar_sq_estimate(const GFunction& g, std::size_t n, std::size_t budget, std::uint64_t seed) {
  constexpr std::size_t kInner = 8;
  Rng rng = stream_rng(seed, n + (std::uint64_t{1} << 40));
  Bracket out;
  out.upper = g.svar_sq_bound(n);
  const auto corners = g.corner_contexts();
  const std::size_t outer = std::max<std::size_t>(1, budget / kInner);
  for (std::size_t i = 0; i < outer; ++i) {
    const Context x = i < corners.size() ? corners[i] : g.random_context(rng, n + 1 + rng() % 8);
    const auto symbols = probe_symbols(g, x);
    std::vector<double> root(symbols.size());
    std::vector<double> root_err(symbols.size());
    std::vector<double> worst(symbols.size(), 0.0);
    for (std::size_t k = 0; k < symbols.size(); ++k) {
      const auto e = g.evaluate(symbols[k], x, kProbeTolerance);
      root[k] = std::sqrt(std::max(0.0, e.value));
      root_err[k] = sqrt_error(e.value, e.error);
    }
    for (std::size_t j = 0; j < kInner; ++j) {
      const Context y = g.random_extension(rng, x, n + 1, 1 + rng() % 8);
      for (std::size_t k = 0; k < symbols.size(); ++k) {
        if (!g.allowed(symbols[k], y)) continue;
        const auto e = g.evaluate(symbols[k], y, kProbeTolerance);
        const double d = std::abs(root[k] - std::sqrt(std::max(0.0, e.value))) - root_err[k] -
                         sqrt_error(e.value, e.error);
        worst[k] = std::max(worst[k], d);
      }
    }
    double sum = 0.0;
    for (double w : worst) sum += w * w;
    out.lower = std::max(out.lower, sum);
  }
  return out;
}

PositivityReport positivity_probe(const GFunction& g, std::size_t budget, std::uint64_t seed, double threshold) {
  Rng rng = stream_rng(seed, 0);
  PositivityReport report;
  const auto corners = g.corner_contexts();
  const std::size_t total = corners.size() + budget;
  for (std::size_t i = 0; i < total; ++i) {
    const Context x = i < corners.size() ? corners[i] : g.random_context(rng, rng() % 12);
    auto symbols = probe_symbols(g, x);
    if (!g.alphabet().is_finite()) {
      for (int k = 0; k < 4; ++k) symbols.push_back(g.random_symbol(rng));
    }
    for (Symbol s : symbols) {
      if (!g.allowed(s, x)) continue;
      const auto e = g.evaluate(s, x, kProbeTolerance);
      ++report.checked;
      if (e.value <= threshold) {
        report.zero_found = true;
        report.symbol = s;
        report.context = x;
        report.value = e.value;
        return report;
      }
    }
  }
  return report;
}

}  // namespace gmlab
