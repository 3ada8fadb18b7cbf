#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gmlab/chain.hpp"

namespace gmlab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

/// Squared Hellinger distance sum (sqrt p_i - sqrt q_i)^2 between sub-probability vectors over a
/// shared enumerated prefix. The unenumerated masses widen the upper end only.
Interval hellinger_sq(std::span<const double> p, std::span<const double> q, double p_tail = 0.0,
                      double q_tail = 0.0);
/// Same, aligning the two distributions by symbol. A symbol enumerated by only one side counts
/// as probability zero on the other side when that side has no tail, and as tail mass otherwise.
Interval hellinger_sq(const SymbolDistribution& p, const SymbolDistribution& q);

/// Truncated logarithm: log x when |log x| < 1, else its sign. tlog(0) = -1, tlog(inf) = 1.
double tlog(double x);

/// Running likelihood-ratio and Hellinger accumulators along one path.
struct HellingerRecord {
  std::size_t n = 0;
  double alpha = 1.0;  // last likelihood-ratio increment, +inf allowed
  Interval d;          // last squared Hellinger distance
  double B = 0.0;      // sum of d midpoints
  double B_width = 0.0;
  double logZ = 0.0;   // -inf once some alpha is 0
  double Y = 0.0;      // sum of tlog alpha
  bool singular = false;
};

/// One step: pi is the null predictive, pi_tilde the one the path is sampled from, sigma the
/// observed symbol (which must have positive pi_tilde probability).
HellingerRecord step_update(HellingerRecord rec, const SymbolDistribution& pi, const SymbolDistribution& pi_tilde,
                            Symbol sigma);

enum class Verdict { kConverges, kDiverges, kInconclusive, kNotLocallyAc };
std::string to_string(Verdict verdict);

struct AcsOptions {
  std::size_t paths = 32;
  std::size_t steps = 100000;
  std::uint64_t seed = 0;
  DistributionOptions distribution;
  double increment_threshold = 0.01;
  double converged_fraction = 0.95;
  double slope_threshold = 0.05;
  std::size_t bootstrap = 1000;
  bool swap = false;  // sample under init_a and treat init_b as the null instead
};

struct PathTrace {
  std::vector<std::size_t> checkpoints;
  std::vector<double> B;
  std::vector<double> B_width;
  std::vector<double> logZ;
  std::vector<double> Y;
  double slope = 0.0;  // OLS of B against ln n over the last decade
  std::optional<std::size_t> singular_step;
  Word witness{{}, Word::Orientation::kChainAdded};
  std::size_t bound_checks = 0;
  std::size_t bound_violations = 0;
  double max_bound_excess = -std::numeric_limits<double>::infinity();

  /// Value at a recorded checkpoint n.
  double B_at(std::size_t n) const;
};

struct SingularWitness {
  std::size_t path = 0;
  std::size_t step = 0;
  Word cylinder{{}, Word::Orientation::kChainAdded};
};

struct AcsResult {
  Verdict verdict = Verdict::kInconclusive;
  double slope = 0.0;  // median of per-path slopes
  std::pair<double, double> slope_ci{0.0, 0.0};
  double final_increment_q95 = 0.0;  // larger of the last two dyadic-window increments, 95th percentile
  double converged_fraction = 0.0;
  std::optional<SingularWitness> singular_witness;
  bool bound_available = false;
  std::size_t bound_violations = 0;
  std::vector<PathTrace> traces;
};

/// Checkpoints used for B_n: steps >> j, powers of ten, and 16 log-spaced points per decade.
std::vector<std::size_t> acs_checkpoints(std::size_t steps);

/// Simulates paths under init_b and tracks the likelihood ratio against init_a.
AcsResult acs_diagnostic(const GFunction& g, const InitialCondition& init_a, const InitialCondition& init_b,
                         const AcsOptions& options);

struct CInequalityScan {
  double C = 1.0;
  double argmax = 0.0;
  std::size_t points = 0;
};

/// sup over the grid of max(r, 1/r) with r = (x tlog x + x tlog^2 x + 1 - x) / (1 - sqrt x)^2; x = 1 is skipped.
CInequalityScan c_inequality_scan(std::span<const double> grid);

}  // namespace gmlab
