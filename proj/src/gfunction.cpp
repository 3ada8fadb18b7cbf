#include "gmlab/gfunction.hpp"

#include <algorithm>
#include <cmath>

#include "gmlab/error.hpp"

namespace gmlab {

std::optional<double> SymbolDistribution::prob(Symbol s) const {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] == s) return probs[static_cast<Eigen::Index>(i)];
  }
  return std::nullopt;
}

void GFunction::check_tolerance(double tol) {
  if (!(tol >= kMinTolerance) || !std::isfinite(tol)) {
    throw Error(ErrorKind::kPrecisionUnavailable,
                "requested tolerance " + std::to_string(tol) + " is below the certified floor");
  }
}

bool GFunction::allowed(Symbol sigma, const Context&) const { return alphabet().contains(sigma); }

std::optional<std::vector<Symbol>> GFunction::finite_support(const Context& x) const {
  if (!alphabet().is_finite()) return std::nullopt;
  std::vector<Symbol> out;
  for (Symbol s : alphabet().symbols()) {
    if (allowed(s, x)) out.push_back(s);
  }
  return out;
}

double GFunction::tail_mass_bound(const Context&, std::size_t m) const {
  if (const auto size = alphabet().size()) return m >= *size ? 0.0 : 1.0;
  return 1.0;
}

SymbolDistribution GFunction::distribution(const Context& x, const DistributionOptions& options) const {
  SymbolDistribution out;
  std::vector<double> probs;
  if (const auto support = finite_support(x)) {
    out.symbols = *support;
    for (Symbol s : out.symbols) {
      const auto e = evaluate(s, x, options.tol);
      probs.push_back(e.value);
      out.error = std::max(out.error, e.error);
    }
  } else {
    std::size_t m = 0;
    while (true) {
      const Symbol s = alphabet().at(m);
      ++m;
      if (allowed(s, x)) {
        const auto e = evaluate(s, x, options.tol);
        out.symbols.push_back(s);
        probs.push_back(e.value);
        out.error = std::max(out.error, e.error);
      }
      if (m % 4 == 0) {
        const double tail = tail_mass_bound(x, m);
        if (tail <= options.cutoff) {
          out.tail_mass = tail;
          break;
        }
      }
      if (m >= options.max_symbols) {
        throw Error(ErrorKind::kHeavyTail, name() + ": tail mass above cutoff after " + std::to_string(m) +
                                               " symbols");
      }
    }
  }
  out.probs = Eigen::Map<const Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
  return out;
}

std::optional<double> GFunction::var_bound(std::size_t) const { return std::nullopt; }
std::optional<double> GFunction::svar_sq_bound(std::size_t) const { return std::nullopt; }
std::optional<double> GFunction::svar_sq_tail_bound(std::size_t) const { return std::nullopt; }
std::optional<double> GFunction::log_var_bound(std::size_t) const { return std::nullopt; }
std::optional<Envelope> GFunction::example_envelope() const { return std::nullopt; }

Symbol GFunction::random_symbol(Rng& rng) const {
  const Alphabet& a = alphabet();
  if (a.is_finite()) return a.at(rng() % *a.size());
  // Mostly small symbols, sometimes moderate, occasionally huge.
  const double u = uniform01(rng);
  Symbol magnitude = 0;
  if (u < 0.6) {
    while (uniform01(rng) < 0.5 && magnitude < 60) ++magnitude;
  } else if (u < 0.9) {
    magnitude = static_cast<Symbol>(rng() % 101);
  } else {
    magnitude = static_cast<Symbol>(rng() % 1000001);
  }
  if (a.kind() == Alphabet::Kind::kIntegers && (rng() & 1u)) return -magnitude;
  return magnitude;
}

namespace {

TailRule random_tail(const GFunction& g, Rng& rng) {
  if (rng() % 2 == 0) return ConstantTail{g.random_symbol(rng)};
  std::vector<Symbol> period(1 + rng() % 3);
  for (auto& s : period) s = g.random_symbol(rng);
  return PeriodicTail{std::move(period)};
}

}  // namespace

Context GFunction::random_context(Rng& rng, std::size_t head_length) const {
  std::vector<Symbol> head(head_length);
  for (auto& s : head) s = random_symbol(rng);
  return Context(head, random_tail(*this, rng));
}

Context GFunction::random_extension(Rng& rng, const Context& x, std::size_t keep, std::size_t extra) const {
  return x.with_suffix(keep, random_context(rng, extra));
}

std::vector<Context> GFunction::corner_contexts() const {
  std::vector<Context> out;
  const Alphabet& a = alphabet();
  if (a.is_finite()) {
    const std::size_t n = std::min<std::size_t>(*a.size(), 16);
    for (std::size_t i = 0; i < n; ++i) out.push_back(Context::constant(a.at(i)));
    if (*a.size() >= 2) out.push_back(Context::periodic({a.at(0), a.at(1)}));
    return out;
  }
  for (Symbol s : {0, 1, 2, 1000000}) out.push_back(Context::constant(s));
  if (a.kind() == Alphabet::Kind::kIntegers) out.push_back(Context::constant(-1000000));
  out.push_back(Context::periodic({0, 1000000}));
  return out;
}

std::unique_ptr<ContextTracker> GFunction::make_tracker(std::vector<Context> inits) const {
  return std::make_unique<DirectTracker>(*this, std::move(inits));
}

Evaluation GFunction::evaluate_or_zero(Symbol sigma, const Context& x, double tol) const {
  if (!alphabet().contains(sigma) || !allowed(sigma, x)) return {};
  return evaluate(sigma, x, tol);
}

void DirectTracker::push(Symbol added) {
  for (auto& c : contexts_) c.push_front(added);
  ++steps_;
}

SymbolDistribution DirectTracker::distribution(std::size_t j, const DistributionOptions& options) const {
  return g_.distribution(contexts_.at(j), options);
}

Evaluation DirectTracker::evaluate(std::size_t j, Symbol sigma, double tol) const {
  return g_.evaluate(sigma, contexts_.at(j), tol);
}

bool DirectTracker::allowed(std::size_t j, Symbol sigma) const {
  return g_.alphabet().contains(sigma) && g_.allowed(sigma, contexts_.at(j));
}

}  // namespace gmlab
