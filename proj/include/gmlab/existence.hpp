#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <json.hpp>

#include "gmlab/gfunction.hpp"

namespace gmlab {

struct DominationViolation {
  Symbol symbol = 0;
  Context context;
  double value = 0.0;  // g(sigma x)
  double bound = 0.0;  // K pi(sigma)
  double margin = 0.0; // value - bound
};

struct DominationReport {
  bool holds = true;           // no violation found (a falsifier, not a proof)
  double min_slack = 0.0;      // min of K pi(sigma) - g(sigma x) over everything checked
  Symbol min_slack_symbol = 0;
  std::optional<Context> min_slack_context;
  std::size_t contexts = 0;
  std::size_t pairs = 0;
  std::optional<DominationViolation> violation;
};

/// Checks g(sigma x) <= K pi(sigma) on the corner contexts plus `samples` seeded random contexts,
/// over every enumerated symbol. A pair violates only when g exceeds K pi by more than its
/// certified evaluation error.
DominationReport domination_check(const GFunction& g, const Envelope& envelope, std::size_t samples,
                                  std::uint64_t seed, const DistributionOptions& options = {});

/// K = exp(var1_bound) and pi(sigma) = g(sigma x0), where var1_bound bounds the oscillation of
/// log g over contexts with the symbol fixed (log_var_bound(0)). Finite supports only.
/// Throws kEnvelopeInvalid when some g(sigma x0) vanishes.
Envelope envelope_from_var1(const GFunction& g, const Context& x0, double var1_bound);

/// `{K, pi: {symbol: prob}, tail: {form, params}, provenance}`.
nlohmann::json envelope_to_json(const Envelope& envelope);
Envelope envelope_from_json(const nlohmann::json& j);

}  // namespace gmlab
