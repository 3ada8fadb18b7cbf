#include "gmlab/chain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

#include "gmlab/error.hpp"
#include "gmlab/parallel.hpp"
#include "gmlab/registry.hpp"

namespace gmlab {

InitialCondition InitialCondition::point(Context context) {
  return InitialCondition({{1.0, std::move(context)}});
}

InitialCondition InitialCondition::mixture(std::vector<std::pair<double, Context>> components) {
  if (components.empty()) throw Error(ErrorKind::kInvalidDistribution, "mixture has no components");
  double total = 0.0;
  for (const auto& [w, ctx] : components) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorKind::kInvalidDistribution, "mixture weight must be positive, got " + format_double(w));
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::kInvalidDistribution, "mixture weights sum to " + format_double(total));
  }
  return InitialCondition(std::move(components));
}

std::string InitialCondition::to_string() const {
  if (is_point()) return components_.front().second.to_string();
  std::string out = "mix:";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += '|';
    out += format_double(components_[i].first) + "@" + components_[i].second.to_string();
  }
  return out;
}

InitialCondition parse_initial_condition(std::string_view literal) {
  constexpr std::string_view kMix = "mix:";
  if (!literal.starts_with(kMix)) return InitialCondition::point(parse_context(literal));
  literal.remove_prefix(kMix.size());
  std::vector<std::pair<double, Context>> components;
  while (true) {
    const auto bar = literal.find('|');
    const auto item = literal.substr(0, bar);
    const auto at = item.find('@');
    if (at == std::string_view::npos) {
      throw Error(ErrorKind::kInvalidContext, "mixture component '" + std::string(item) + "' lacks '<weight>@'");
    }
    double w = 0.0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + at, w);
    if (ec != std::errc() || end != item.data() + at) {
      throw Error(ErrorKind::kInvalidContext, "bad mixture weight in '" + std::string(item) + "'");
    }
    components.emplace_back(w, parse_context(item.substr(at + 1)));
    if (bar == std::string_view::npos) break;
    literal.remove_prefix(bar + 1);
  }
  return InitialCondition::mixture(std::move(components));
}

MixturePredictive::MixturePredictive(Alphabet alphabet, std::vector<std::size_t> tracked, std::vector<double> weights)
    : alphabet_(std::move(alphabet)), tracked_(std::move(tracked)), weights_(std::move(weights)) {
  if (tracked_.empty() || tracked_.size() != weights_.size()) {
    throw Error(ErrorKind::kInvalidDistribution, "mixture predictive needs one weight per component");
  }
}

SymbolDistribution MixturePredictive::distribution(const ContextTracker& tracker,
                                                   const DistributionOptions& options) const {
  if (tracked_.size() == 1) return tracker.distribution(tracked_.front(), options);

  std::vector<SymbolDistribution> parts;
  std::vector<Symbol> symbols;
  for (std::size_t j = 0; j < tracked_.size(); ++j) {
    if (weights_[j] == 0.0) {
      parts.emplace_back();
      continue;
    }
    parts.push_back(tracker.distribution(tracked_[j], options));
    symbols.insert(symbols.end(), parts.back().symbols.begin(), parts.back().symbols.end());
  }
  std::sort(symbols.begin(), symbols.end());
  symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());

  SymbolDistribution out;
  out.probs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(symbols.size()));
  std::map<Symbol, Eigen::Index> slot;
  for (std::size_t i = 0; i < symbols.size(); ++i) slot[symbols[i]] = static_cast<Eigen::Index>(i);

  for (std::size_t j = 0; j < tracked_.size(); ++j) {
    const double w = weights_[j];
    if (w == 0.0) continue;
    const auto& part = parts[j];
    std::vector<bool> seen(symbols.size(), false);
    for (std::size_t i = 0; i < part.symbols.size(); ++i) {
      const auto k = slot.at(part.symbols[i]);
      out.probs[k] += w * part.probs[static_cast<Eigen::Index>(i)];
      seen[static_cast<std::size_t>(k)] = true;
    }
    // symbols this component left in its tail; its tail bound still covers them
    for (std::size_t k = 0; k < symbols.size(); ++k) {
      if (seen[k] || !tracker.allowed(tracked_[j], symbols[k])) continue;
      out.probs[static_cast<Eigen::Index>(k)] += w * tracker.evaluate(tracked_[j], symbols[k], options.tol).value;
    }
    out.tail_mass += w * part.tail_mass;
    out.error = std::max(out.error, part.error);
  }

  // present in enumeration order
  std::vector<std::size_t> order(symbols.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return alphabet_.index_of(symbols[a]) < alphabet_.index_of(symbols[b]);
  });
  SymbolDistribution sorted;
  sorted.tail_mass = out.tail_mass;
  sorted.error = out.error;
  sorted.probs.resize(out.probs.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.symbols.push_back(symbols[order[i]]);
    sorted.probs[static_cast<Eigen::Index>(i)] = out.probs[static_cast<Eigen::Index>(order[i])];
  }
  return sorted;
}

double MixturePredictive::probability(const ContextTracker& tracker, Symbol sigma, double tol) const {
  double p = 0.0;
  for (std::size_t j = 0; j < tracked_.size(); ++j) {
    if (weights_[j] == 0.0 || !tracker.allowed(tracked_[j], sigma)) continue;
    p += weights_[j] * tracker.evaluate(tracked_[j], sigma, tol).value;
  }
  return p;
}

bool MixturePredictive::observe(const ContextTracker& tracker, Symbol sigma, double tol) {
  std::vector<double> next(weights_.size(), 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < tracked_.size(); ++j) {
    if (weights_[j] == 0.0 || !tracker.allowed(tracked_[j], sigma)) continue;
    next[j] = weights_[j] * tracker.evaluate(tracked_[j], sigma, tol).value;
    total += next[j];
  }
  if (!(total > 0.0)) return false;
  for (std::size_t j = 0; j < next.size(); ++j) weights_[j] = next[j] / total;
  return true;
}

namespace {

std::vector<Context> component_contexts(const InitialCondition& init) {
  std::vector<Context> out;
  for (const auto& [w, ctx] : init.components()) out.push_back(ctx);
  return out;
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

std::vector<double> component_weights(const InitialCondition& init) {
  std::vector<double> out;
  for (const auto& [w, ctx] : init.components()) out.push_back(w);
  return out;
}

template <typename Evaluate, typename Allowed>
Symbol rejection_draw(const Alphabet& alphabet, const Envelope& envelope, RngStream& rng, SamplingStats& stats,
                      Evaluate&& evaluate, Allowed&& allowed) {
  constexpr std::uint64_t kMaxProposals = 100'000'000;
  for (std::uint64_t attempt = 0; attempt < kMaxProposals; ++attempt) {
    const Symbol sigma = envelope.sample(rng.engine(), alphabet);
    ++stats.proposals;
    const double u = rng.uniform();
    if (!allowed(sigma)) continue;
    const double bound = envelope.K * envelope.pi(sigma, alphabet);
    const double value = evaluate(sigma);
    if (value > bound * (1.0 + 1e-12)) {
      throw Error(ErrorKind::kEnvelopeInvalid, "envelope violated at symbol " + std::to_string(sigma) + ": g = " +
                                                   format_double(value) + " > K pi = " + format_double(bound));
    }
    if (u * bound < value) {
      ++stats.acceptances;
      ++stats.draws;
      return sigma;
    }
  }
  throw Error(ErrorKind::kEnvelopeInvalid, "rejection sampler accepted nothing in 1e8 proposals");
}

}  // namespace

ChainCursor::ChainCursor(const GFunction& g, const InitialCondition& init)
    : tracker(g.make_tracker(component_contexts(init))),
      predictive(g.alphabet(), iota(init.components().size()), component_weights(init)) {}

void ChainCursor::push(Symbol sigma, double tol) {
  if (!predictive.observe(*tracker, sigma, tol)) {
    throw Error(ErrorKind::kOutsideSubshift,
                "symbol " + std::to_string(sigma) + " has probability zero under the initial condition");
  }
  tracker->push(sigma);
}

SymbolDistribution conditional_distribution(const GFunction& g, const Word& added, const InitialCondition& init,
                                            const DistributionOptions& options) {
  const Word in_order = added.orientation == Word::Orientation::kChainAdded ? added : added.reoriented();
  ChainCursor cursor(g, init);
  for (Symbol s : in_order.symbols) cursor.push(s, options.tol);
  return cursor.distribution(options);
}

Symbol sample_symbol(const SymbolDistribution& dist, double u, SamplingStats* stats, double cutoff) {
  if (dist.symbols.empty()) throw Error(ErrorKind::kInvalidDistribution, "cannot sample an empty distribution");
  if (dist.tail_mass > cutoff) {
    throw Error(ErrorKind::kHeavyTail, "unenumerated mass " + format_double(dist.tail_mass) + " exceeds cutoff " +
                                           format_double(cutoff));
  }
  const double total = dist.enumerated_mass();
  if (!(total > 0.0)) throw Error(ErrorKind::kInvalidDistribution, "distribution has no mass");
  if (stats) {
    ++stats->draws;
    if (dist.tail_mass > 0.0) ++stats->cutoff_events;
  }
  const double target = u * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < dist.symbols.size(); ++i) {
    const double p = dist.probs[static_cast<Eigen::Index>(i)];
    if (p <= 0.0) continue;
    cumulative += p;
    last_positive = i;
    if (target < cumulative) return dist.symbols[i];
  }
  return dist.symbols[last_positive];
}

Symbol sample_by_envelope(const GFunction& g, const Context& x, const Envelope& envelope, RngStream& rng,
                          SamplingStats& stats, double tol) {
  return rejection_draw(
      g.alphabet(), envelope, rng, stats, [&](Symbol s) { return g.evaluate(s, x, tol).value; },
      [&](Symbol s) { return g.allowed(s, x); });
}

Context PathState::current_context() const {
  Context ctx = init.components().at(component.value_or(0)).second;
  for (Symbol s : added.symbols) ctx.push_front(s);
  return ctx;
}

SimulationResult simulate_path(const GFunction& g, const InitialCondition& init, std::size_t steps, RngStream& rng,
                               const SimulationOptions& options) {
  SimulationResult result{PathState{init}, {}};
  PathState& path = result.path;
  std::size_t component = 0;
  if (!init.is_point()) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    component = init.components().size() - 1;
    for (std::size_t j = 0; j < init.components().size(); ++j) {
      cumulative += init.components()[j].first;
      if (u < cumulative) {
        component = j;
        break;
      }
    }
    path.component = component;
  }
  if (options.envelope) options.envelope->validate(g.alphabet());

  auto tracker = g.make_tracker({init.components()[component].second});
  path.added.symbols.reserve(steps);
  const double tol = options.distribution.tol;
  for (std::size_t n = 0; n < steps; ++n) {
    Symbol sigma;
    if (options.envelope) {
      sigma = rejection_draw(
          g.alphabet(), *options.envelope, rng, result.stats,
          [&](Symbol s) { return tracker->evaluate(0, s, tol).value; },
          [&](Symbol s) { return tracker->allowed(0, s); });
    } else {
      sigma = sample_symbol(tracker->distribution(0, options.distribution), rng.uniform(), &result.stats,
                            options.distribution.cutoff);
    }
    tracker->push(sigma);
    path.added.symbols.push_back(sigma);
  }
  return result;
}

std::vector<SimulationResult> simulate_paths(const GFunction& g, const InitialCondition& init, std::size_t steps,
                                             std::uint64_t master_seed, std::size_t count,
                                             const SimulationOptions& options) {
  std::vector<SimulationResult> out(count, SimulationResult{PathState{init}, {}});
  parallel_for(count, [&](std::size_t i) {
    RngStream rng(master_seed, i);
    out[i] = simulate_path(g, init, steps, rng, options);
  });
  return out;
}

void write_path_csv(std::ostream& out, const PathState& path, const std::vector<std::string>& header) {
  for (const auto& line : header) out << "# " << line << '\n';
  out << "step,symbol\n";
  for (std::size_t n = 0; n < path.added.size(); ++n) out << (n + 1) << ',' << path.added.symbols[n] << '\n';
}

}  // namespace gmlab
