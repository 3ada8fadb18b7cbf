#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "gmlab/numerics.hpp"
#include "gmlab/seqspace.hpp"

namespace gmlab {

/// Closed-form tail of an envelope's probability vector, indexed by enumeration position.
struct EnvelopeTail {
  enum class Form { kNone, kGeometric, kPower };

  Form form = Form::kNone;
  std::size_t start = 0;  // first enumeration index covered by the tail
  double first = 0.0;     // geometric: mass at `start`
  double ratio = 0.0;     // geometric: successive ratio in (0,1)
  double exponent = 0.0;  // power: mass scale * (i - start + 1)^{-exponent}
  double scale = 0.0;

  /// Mass at enumeration index i >= start.
  double mass_at(std::size_t i) const;
  /// Mass over enumeration indices >= max(i, start).
  double mass_from(std::size_t i) const;
};

/// Domination envelope: g(sigma x) <= K pi(sigma) for every x.
struct Envelope {
  enum class Provenance { kUser, kVar1Derived, kExampleSpecific };

  double K = 1.0;
  std::map<Symbol, double> explicit_probs;
  EnvelopeTail tail;
  Provenance provenance = Provenance::kUser;

  double pi(Symbol s, const Alphabet& alphabet) const;
  /// sum of pi over all symbols (explicit entries plus the closed-form tail).
  double total_mass() const;
  /// Throws kEnvelopeInvalid unless K >= 1, entries are non-negative and the mass is 1 within 1e-12.
  void validate(const Alphabet& alphabet) const;
  /// Exact inverse-CDF draw from pi in the alphabet's enumeration order.
  Symbol sample(Rng& rng, const Alphabet& alphabet) const;
};

std::string to_string(Envelope::Provenance provenance);

}  // namespace gmlab
