#include "gmlab/existence.hpp"

#include <cmath>
#include <limits>

#include "gmlab/error.hpp"
#include "gmlab/registry.hpp"

namespace gmlab {

DominationReport domination_check(const GFunction& g, const Envelope& envelope, std::size_t samples,
                                  std::uint64_t seed, const DistributionOptions& options) {
  envelope.validate(g.alphabet());
  DominationReport report;
  report.min_slack = std::numeric_limits<double>::infinity();

  std::vector<Context> contexts = g.corner_contexts();
  Rng rng = stream_rng(seed, 0);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto head = static_cast<std::size_t>(uniform01(rng) * 24.0);
    contexts.push_back(g.random_context(rng, head));
  }

  for (const auto& x : contexts) {
    ++report.contexts;
    const SymbolDistribution dist = g.distribution(x, options);
    for (std::size_t i = 0; i < dist.symbols.size(); ++i) {
      const Symbol s = dist.symbols[i];
      const Evaluation e = g.evaluate(s, x, options.tol);
      const double bound = envelope.K * envelope.pi(s, g.alphabet());
      const double slack = bound - e.value;
      ++report.pairs;
      if (slack < report.min_slack) {
        report.min_slack = slack;
        report.min_slack_symbol = s;
        report.min_slack_context = x;
      }
      if (e.value - e.error > bound && !report.violation) {
        report.holds = false;
        report.violation = DominationViolation{s, x, e.value, bound, e.value - bound};
      }
    }
  }
  return report;
}

Envelope envelope_from_var1(const GFunction& g, const Context& x0, double var1_bound) {
  if (!(var1_bound >= 0.0) || !std::isfinite(var1_bound)) {
    throw Error(ErrorKind::kEnvelopeInvalid, "var1 bound must be finite and non-negative");
  }
  const auto zero_at_x0 = [&](Symbol s) {
    return Error(ErrorKind::kEnvelopeInvalid,
                 "envelope invalid at x0: g(" + std::to_string(s) + " . " + x0.to_string() + ") = 0");
  };
  if (!g.alphabet().is_finite()) {
    // report a vanishing entry first: that is fatal whatever the tail
    const auto dist = g.distribution(x0, {});
    for (Eigen::Index i = 0; i < dist.probs.size(); ++i) {
      if (!(dist.probs[i] > 0.0)) throw zero_at_x0(dist.symbols[static_cast<std::size_t>(i)]);
    }
    throw Error(ErrorKind::kEnvelopeInvalid, "var1-derived envelopes need a finite alphabet");
  }
  const auto support = std::optional(g.alphabet().symbols());
  Envelope env;
  env.K = std::exp(var1_bound);
  env.provenance = Envelope::Provenance::kVar1Derived;
  double total = 0.0;
  for (Symbol s : *support) {
    const double v = g.evaluate_or_zero(s, x0, kMinTolerance).value;
    if (!(v > 0.0)) throw zero_at_x0(s);
    env.explicit_probs[s] = v;
    total += v;
  }
  // absorb rounding so the mass check holds exactly
  for (auto& [s, p] : env.explicit_probs) p /= total;
  env.validate(g.alphabet());
  return env;
}

namespace {

std::string form_name(EnvelopeTail::Form form) {
  switch (form) {
    case EnvelopeTail::Form::kNone: return "none";
    case EnvelopeTail::Form::kGeometric: return "geometric";
    case EnvelopeTail::Form::kPower: return "power";
  }
  return "?";
}

}  // namespace

nlohmann::json envelope_to_json(const Envelope& envelope) {
  nlohmann::json pi = nlohmann::json::object();
  for (const auto& [s, p] : envelope.explicit_probs) pi[std::to_string(s)] = p;
  nlohmann::json tail = {{"form", form_name(envelope.tail.form)}};
  nlohmann::json params = nlohmann::json::object();
  switch (envelope.tail.form) {
    case EnvelopeTail::Form::kNone: break;
    case EnvelopeTail::Form::kGeometric:
      params = {{"start", envelope.tail.start}, {"first", envelope.tail.first}, {"ratio", envelope.tail.ratio}};
      break;
    case EnvelopeTail::Form::kPower:
      params = {{"start", envelope.tail.start},
                {"exponent", envelope.tail.exponent},
                {"scale", envelope.tail.scale}};
      break;
  }
  tail["params"] = params;
  return {{"K", envelope.K}, {"pi", pi}, {"tail", tail}, {"provenance", to_string(envelope.provenance)}};
}

Envelope envelope_from_json(const nlohmann::json& j) {
  try {
    Envelope env;
    env.K = j.at("K").get<double>();
    for (const auto& [key, value] : j.at("pi").items()) env.explicit_probs[parse_symbol(key)] = value.get<double>();
    if (j.contains("tail")) {
      const auto& tail = j.at("tail");
      const auto form = tail.at("form").get<std::string>();
      const auto& params = tail.contains("params") ? tail.at("params") : nlohmann::json::object();
      if (form == "geometric") {
        env.tail.form = EnvelopeTail::Form::kGeometric;
        env.tail.start = params.at("start").get<std::size_t>();
        env.tail.first = params.at("first").get<double>();
        env.tail.ratio = params.at("ratio").get<double>();
      } else if (form == "power") {
        env.tail.form = EnvelopeTail::Form::kPower;
        env.tail.start = params.at("start").get<std::size_t>();
        env.tail.exponent = params.at("exponent").get<double>();
        env.tail.scale = params.at("scale").get<double>();
      } else if (form != "none") {
        throw Error(ErrorKind::kEnvelopeInvalid, "unknown tail form '" + form + "'");
      }
    }
    const auto provenance = j.value("provenance", std::string("user"));
    if (provenance == "user") {
      env.provenance = Envelope::Provenance::kUser;
    } else if (provenance == "var1-derived") {
      env.provenance = Envelope::Provenance::kVar1Derived;
    } else if (provenance == "example-specific") {
      env.provenance = Envelope::Provenance::kExampleSpecific;
    } else {
      throw Error(ErrorKind::kEnvelopeInvalid, "unknown provenance '" + provenance + "'");
    }
    return env;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kEnvelopeInvalid, std::string("malformed envelope JSON: ") + e.what());
  }
}

}  // namespace gmlab
