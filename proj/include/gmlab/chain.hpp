#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gmlab/gfunction.hpp"

namespace gmlab {

/// Distribution of x^(0): a point context or a finite mixture of point contexts.
class InitialCondition {
 public:
  static InitialCondition point(Context context);
  /// Weights must be positive and sum to 1 within 1e-12.
  static InitialCondition mixture(std::vector<std::pair<double, Context>> components);

  bool is_point() const { return components_.size() == 1; }
  const std::vector<std::pair<double, Context>>& components() const { return components_; }
  /// "const:0" for points, "mix:0.5@const:0|0.5@const:1" for mixtures.
  std::string to_string() const;

 private:
  explicit InitialCondition(std::vector<std::pair<double, Context>> components)
      : components_(std::move(components)) {}

  std::vector<std::pair<double, Context>> components_;
};

/// Accepts a context literal or "mix:<w>@<context>|<w>@<context>|...".
InitialCondition parse_initial_condition(std::string_view literal);

/// Reproducible random stream for path `path_index` of an experiment seeded with `master_seed`.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t path_index)
      : master_seed_(master_seed), path_index_(path_index), engine_(stream_rng(master_seed, path_index)) {}

  double uniform() {
    ++counter_;
    return uniform01(engine_);
  }
  Rng& engine() { return engine_; }
  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t path_index() const { return path_index_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t path_index_;
  Rng engine_;
  std::uint64_t counter_ = 0;
};

/// Predictive distribution of the next added symbol under a (possibly mixed) initial condition
/// whose components are tracked contexts. Mixture weights are the posterior weights given the
/// symbols added so far.
class MixturePredictive {
 public:
  MixturePredictive(Alphabet alphabet, std::vector<std::size_t> tracked, std::vector<double> weights);

  SymbolDistribution distribution(const ContextTracker& tracker, const DistributionOptions& options) const;
  /// Probability of sigma as the next symbol.
  double probability(const ContextTracker& tracker, Symbol sigma, double tol) const;
  /// Bayes update for the symbol about to be pushed onto the tracker. Returns false when
  /// sigma has probability zero under every component.
  bool observe(const ContextTracker& tracker, Symbol sigma, double tol);

  const std::vector<double>& weights() const { return weights_; }

 private:
  Alphabet alphabet_;
  std::vector<std::size_t> tracked_;
  std::vector<double> weights_;
};

/// Tracker over all components of `init` plus the matching predictive.
struct ChainCursor {
  std::unique_ptr<ContextTracker> tracker;
  MixturePredictive predictive;

  ChainCursor(const GFunction& g, const InitialCondition& init);
  SymbolDistribution distribution(const DistributionOptions& options) const {
    return predictive.distribution(*tracker, options);
  }
  void push(Symbol sigma, double tol);
};

/// pi_n(. | added, init): law of the next symbol after the chain added `added` (in order of addition).
SymbolDistribution conditional_distribution(const GFunction& g, const Word& added, const InitialCondition& init,
                                            const DistributionOptions& options = {});

struct SamplingStats {
  std::uint64_t draws = 0;
  std::uint64_t cutoff_events = 0;  // draws from a truncated, renormalized distribution
  std::uint64_t proposals = 0;      // envelope rejection sampling
  std::uint64_t acceptances = 0;
};

/// Inverse-CDF draw in enumeration order: the first symbol whose cumulative mass exceeds u.
/// Truncated distributions are renormalized over the enumerated symbols (counted as a cutoff
/// event); a tail above `cutoff` is a kHeavyTail error.
Symbol sample_symbol(const SymbolDistribution& dist, double u, SamplingStats* stats = nullptr,
                     double cutoff = 1e-12);

/// Exact rejection sampling from g(. x) using a domination envelope g(sigma x) <= K pi(sigma).
Symbol sample_by_envelope(const GFunction& g, const Context& x, const Envelope& envelope, RngStream& rng,
                          SamplingStats& stats, double tol = kDefaultTolerance);

struct PathState {
  explicit PathState(InitialCondition initial) : init(std::move(initial)) {}

  InitialCondition init;
  Word added{{}, Word::Orientation::kChainAdded};  // x_{-1}, x_{-2}, ... in order of addition
  std::optional<std::size_t> component;            // mixture component drawn for x^(0)

  std::size_t steps() const { return added.size(); }
  /// x^(n) = (x_{-n}, ..., x_{-1}) . x^(0) for the point (or drawn) initial context.
  Context current_context() const;
};

struct SimulationOptions {
  DistributionOptions distribution;
  std::optional<Envelope> envelope;  // exact rejection sampling instead of truncated inverse CDF
};

struct SimulationResult {
  PathState path;
  SamplingStats stats;
};

/// One g-chain path of `steps` added symbols, deterministic in (master seed, path index).
SimulationResult simulate_path(const GFunction& g, const InitialCondition& init, std::size_t steps,
                               RngStream& rng, const SimulationOptions& options = {});

/// Independent paths 0..count-1, run in parallel.
std::vector<SimulationResult> simulate_paths(const GFunction& g, const InitialCondition& init, std::size_t steps,
                                             std::uint64_t master_seed, std::size_t count,
                                             const SimulationOptions& options = {});

/// Path CSV: `#`-prefixed header lines followed by `step,symbol` rows (step n holds x_{-n}).
void write_path_csv(std::ostream& out, const PathState& path, const std::vector<std::string>& header);

}  // namespace gmlab
