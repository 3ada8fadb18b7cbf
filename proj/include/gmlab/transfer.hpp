#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gmlab/chain.hpp"

namespace gmlab {

struct MarkovApproxOptions {
  std::size_t depth = 1;
  std::size_t truncation = 0;  // retained symbols (first M in enumeration order); 0 keeps a finite alphabet whole
  std::optional<Context> tail_fill;  // default: constant first symbol
  std::size_t max_states = std::size_t{1} << 20;
  double escape_budget = 0.5;  // largest escaped mass tolerated at any state
  double tol = 1e-13;
};

/// Depth-k Markov surrogate of g on a truncated alphabet.
///
/// A state is a word (w_0, ..., w_{k-1}) read as context coordinates 0..k-1; the symbol sigma
/// moves it to (sigma, w_0, ..., w_{k-2}) with probability g(sigma . w . fill) renormalized over
/// the retained symbols. Only adjacencies inside a word are checked against the subshift.
struct MarkovApprox {
  std::size_t depth = 1;
  std::vector<Symbol> symbols;            // retained alphabet
  std::vector<std::vector<Symbol>> states;  // coordinate order
  Eigen::SparseMatrix<double, Eigen::RowMajor> kernel;
  std::vector<double> escaped;       // 1 - retained mass, per state
  std::vector<double> escape_bound;  // certified bound on mass past the retained symbols
  Context tail_fill;
  bool exact = false;  // g has depth <= k and nothing was truncated

  std::size_t size() const { return states.size(); }
  std::optional<std::size_t> index_of(const std::vector<Symbol>& word) const;
  std::string state_word(std::size_t i) const;
};

MarkovApprox build_markov_approx(const GFunction& g, const MarkovApproxOptions& options);

struct StationaryResult {
  enum class Flag { kConverged, kMaxIter, kPeriodicSuspect };
  Eigen::VectorXd distribution;
  double residual = 0.0;  // || pi P - pi ||_1
  std::size_t iterations = 0;
  Flag flag = Flag::kConverged;
};

std::string to_string(StationaryResult::Flag flag);

/// pi <- pi P until the l1 increment is below tol. A start that is already a fixed point takes
/// 0 iterations; pi_t == pi_{t-2} without convergence is flagged periodic-suspect.
StationaryResult power_iteration(const MarkovApprox& ma, const Eigen::VectorXd& start, double tol = 1e-13,
                                 std::size_t max_iter = 1000000);

/// Dense solve of pi (P - I) = 0, sum pi = 1. Throws kNoUniqueSolution when the nullspace is
/// larger than one dimension and kInstanceTooLarge beyond `dense_cap` states.
StationaryResult exact_stationary(const MarkovApprox& ma, std::size_t dense_cap = 4096);

/// Half the l1 distance.
double tv_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

struct UniquenessOptions {
  MarkovApproxOptions approx;
  std::size_t starts = 10;
  double tol = 1e-13;
  std::size_t max_iter = 1000000;
  std::uint64_t seed = 0;
  double tv_threshold = 1e-8;
};

struct UniquenessReport {
  std::size_t states = 0;
  bool exact = false;
  std::vector<std::size_t> start_states;
  std::vector<StationaryResult> limits;
  Eigen::MatrixXd tv;  // pairwise distances between limits
  double max_tv = 0.0;
  bool all_converged = true;
  bool periodic_suspect = false;
  bool positive = false;                   // every transition the subshift allows has positive probability
  std::optional<bool> svar_summable;       // certified by the analytic bounds, when they exist
  double max_escaped = 0.0;
  std::string outcome;  // "consistent", "inconsistent" or "no-prediction"
};

/// Runs power iteration from point masses on distinct seeded random states and compares the limits.
UniquenessReport uniqueness_probe(const GFunction& g, const UniquenessOptions& options);
/// Same, on an already built surrogate.
UniquenessReport uniqueness_probe(const GFunction& g, const MarkovApprox& ma, const UniquenessOptions& options);

struct EscapeReport {
  std::vector<std::size_t> checkpoints;
  std::vector<double> mean_abs;   // E|x_{-n}|
  std::vector<double> occupancy;  // fraction of paths with |x_{-n}| <= window
  double exponent = 0.0;          // log-log slope of E|x_{-n}| over n >= 10
  std::size_t window = 5;
};

EscapeReport escape_diagnostic(const GFunction& g, const InitialCondition& init, std::size_t steps,
                               std::size_t paths, std::uint64_t seed, std::size_t window = 5,
                               const SimulationOptions& options = {});

/// `from_state,symbol,prob` triplets.
void write_kernel_csv(std::ostream& out, const MarkovApprox& ma, const std::vector<std::string>& header);
/// `state_word,prob` rows.
void write_stationary_csv(std::ostream& out, const MarkovApprox& ma, const Eigen::VectorXd& distribution,
                          const std::vector<std::string>& header);

}  // namespace gmlab
