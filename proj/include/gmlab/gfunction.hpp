#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gmlab/envelope.hpp"
#include "gmlab/numerics.hpp"
#include "gmlab/seqspace.hpp"

namespace gmlab {

/// A value of g together with a certified bound on its absolute error.
struct Evaluation {
  double value = 0.0;
  double error = 0.0;
};

/// Smallest evaluation tolerance any evaluator will promise.
inline constexpr double kMinTolerance = 1e-14;
inline constexpr double kDefaultTolerance = 1e-9;

/// The distribution sigma -> g(sigma x) enumerated over a prefix of the support.
struct SymbolDistribution {
  std::vector<Symbol> symbols;  // enumeration order
  Eigen::VectorXd probs;
  double tail_mass = 0.0;       // certified bound on the mass outside `symbols`
  double error = 0.0;           // largest per-entry evaluation error

  std::optional<double> prob(Symbol s) const;
  double enumerated_mass() const { return probs.sum(); }
};

struct DistributionOptions {
  double tol = kDefaultTolerance;
  double cutoff = 1e-12;         // stop enumerating countable supports once the tail is below this
  std::size_t max_symbols = 1u << 20;
};

class ContextTracker;

/// An evaluable g-function on S^{Z+}: g(sigma x) is the probability of the symbol sigma
/// given the context x, and sums to one over sigma for every x.
///
/// Implementations are immutable after construction and safe to share between threads.
/// Depth k (when finite) means g(sigma x) depends on context coordinates 0..k-1 only.
/// Variation conventions: var_n f fixes the coordinates 0..n of the point sigma.x, so for g
/// that is sigma and context coordinates 0..n-1. svar_n sqrt(g) fixes context coordinates 0..n.
class GFunction {
 public:
  virtual ~GFunction() = default;

  /// Canonical registry string, accepted by make_gfunction.
  virtual std::string name() const = 0;
  virtual std::string description() const = 0;
  virtual const Alphabet& alphabet() const = 0;
  virtual std::optional<std::size_t> depth() const { return std::nullopt; }

  /// Subshift constraint: whether sigma may precede x.
  virtual bool allowed(Symbol sigma, const Context& x) const;
  /// The allowed symbols at x in enumeration order when that set is known to be finite.
  virtual std::optional<std::vector<Symbol>> finite_support(const Context& x) const;

  /// g(sigma x) within `tol`. Throws kOutsideSubshift / kOutsideAlphabet / kPrecisionUnavailable.
  virtual Evaluation evaluate(Symbol sigma, const Context& x, double tol) const = 0;
  virtual SymbolDistribution distribution(const Context& x, const DistributionOptions& options) const;
  /// Upper bound on the g-mass of symbols past the first m in enumeration order.
  virtual double tail_mass_bound(const Context& x, std::size_t m) const;

  /// Upper bound on var_n g.
  virtual std::optional<double> var_bound(std::size_t n) const;
  /// Upper bound on (svar_n sqrt g)^2.
  virtual std::optional<double> svar_sq_bound(std::size_t n) const;
  /// Upper bound on sum_{m > n} (svar_m sqrt g)^2; +infinity when the bounds are not summable.
  virtual std::optional<double> svar_sq_tail_bound(std::size_t n) const;
  /// Upper bound on var_n log g (+infinity allowed).
  virtual std::optional<double> log_var_bound(std::size_t n) const;
  /// Domination envelope shipped with the example, if any.
  virtual std::optional<Envelope> example_envelope() const;

  /// Test-context generation, respecting the subshift constraint.
  virtual Symbol random_symbol(Rng& rng) const;
  virtual Context random_context(Rng& rng, std::size_t head_length) const;
  /// Keeps coordinates 0..keep-1 of x and randomizes the rest (extra head symbols plus a random tail).
  virtual Context random_extension(Rng& rng, const Context& x, std::size_t keep, std::size_t extra) const;
  /// Deterministic adversarial contexts (constant sequences, large symbols).
  virtual std::vector<Context> corner_contexts() const;

  /// Tracks the chain contexts (added symbols) . init_j for several initial contexts at once.
  virtual std::unique_ptr<ContextTracker> make_tracker(std::vector<Context> inits) const;

  /// Evaluation that treats disallowed symbols as probability zero.
  Evaluation evaluate_or_zero(Symbol sigma, const Context& x, double tol) const;

 protected:
  static void check_tolerance(double tol);
};

using GFunctionPtr = std::shared_ptr<const GFunction>;

/// Contexts x^(n) = (x_{-n}, ..., x_{-1}) . init_j sharing one stream of added symbols.
class ContextTracker {
 public:
  virtual ~ContextTracker() = default;

  /// Records the next added symbol (it becomes coordinate 0 of every tracked context).
  virtual void push(Symbol added) = 0;
  virtual SymbolDistribution distribution(std::size_t j, const DistributionOptions& options) const = 0;
  virtual Evaluation evaluate(std::size_t j, Symbol sigma, double tol) const = 0;
  virtual bool allowed(std::size_t j, Symbol sigma) const = 0;
  virtual Context context(std::size_t j) const = 0;
  virtual std::size_t size() const = 0;
  virtual std::size_t steps() const = 0;
};

/// Tracker holding one materialized Context per initial condition.
class DirectTracker : public ContextTracker {
 public:
  DirectTracker(const GFunction& g, std::vector<Context> inits) : g_(g), contexts_(std::move(inits)) {}

  void push(Symbol added) override;
  SymbolDistribution distribution(std::size_t j, const DistributionOptions& options) const override;
  Evaluation evaluate(std::size_t j, Symbol sigma, double tol) const override;
  bool allowed(std::size_t j, Symbol sigma) const override;
  Context context(std::size_t j) const override { return contexts_.at(j); }
  std::size_t size() const override { return contexts_.size(); }
  std::size_t steps() const override { return steps_; }

 private:
  const GFunction& g_;
  std::vector<Context> contexts_;
  std::size_t steps_ = 0;
};

}  // namespace gmlab
