#include "gmlab/envelope.hpp"

#include <cmath>

#include "gmlab/error.hpp"

namespace gmlab {

double EnvelopeTail::mass_at(std::size_t i) const {
  if (form == Form::kNone || i < start) return 0.0;
  const auto offset = static_cast<double>(i - start);
  if (form == Form::kGeometric) return first * std::pow(ratio, offset);
  return scale * std::pow(offset + 1.0, -exponent);
}

double EnvelopeTail::mass_from(std::size_t i) const {
  const std::size_t from = std::max(i, start);
  const auto offset = static_cast<double>(from - start);
  switch (form) {
    case Form::kNone: return 0.0;
    case Form::kGeometric: return first * std::pow(ratio, offset) / (1.0 - ratio);
    case Form::kPower: return scale * power_tail(exponent, offset + 1.0);
  }
  return 0.0;
}

double Envelope::pi(Symbol s, const Alphabet& alphabet) const {
  if (const auto it = explicit_probs.find(s); it != explicit_probs.end()) return it->second;
  if (!alphabet.contains(s)) return 0.0;
  return tail.mass_at(alphabet.index_of(s));
}

double Envelope::total_mass() const {
  double sum = 0.0;
  for (const auto& [s, p] : explicit_probs) sum += p;
  return sum + tail.mass_from(tail.start);
}

void Envelope::validate(const Alphabet& alphabet) const {
  if (!(K >= 1.0) || !std::isfinite(K)) throw Error(ErrorKind::kEnvelopeInvalid, "envelope needs finite K >= 1");
  for (const auto& [s, p] : explicit_probs) {
    if (!(p >= 0.0)) throw Error(ErrorKind::kEnvelopeInvalid, "negative envelope mass");
    if (!alphabet.contains(s)) throw Error(ErrorKind::kEnvelopeInvalid, "envelope symbol outside alphabet");
    if (tail.form != EnvelopeTail::Form::kNone && alphabet.index_of(s) >= tail.start) {
      throw Error(ErrorKind::kEnvelopeInvalid, "explicit envelope entry overlaps the closed-form tail");
    }
  }
  switch (tail.form) {
    case EnvelopeTail::Form::kNone: break;
    case EnvelopeTail::Form::kGeometric:
      if (!(tail.first >= 0.0) || !(tail.ratio >= 0.0 && tail.ratio < 1.0)) {
        throw Error(ErrorKind::kEnvelopeInvalid, "geometric tail needs first >= 0 and ratio in [0,1)");
      }
      break;
    case EnvelopeTail::Form::kPower:
      if (!(tail.scale >= 0.0) || !(tail.exponent > 1.0)) {
        throw Error(ErrorKind::kEnvelopeInvalid, "power tail needs scale >= 0 and exponent > 1");
      }
      break;
  }
  if (tail.form != EnvelopeTail::Form::kNone && alphabet.size() && tail.start < *alphabet.size()) {
    throw Error(ErrorKind::kEnvelopeInvalid, "closed-form tails are only meaningful on countable alphabets");
  }
  if (std::abs(total_mass() - 1.0) > 1e-12) {
    throw Error(ErrorKind::kEnvelopeInvalid, "envelope mass " + std::to_string(total_mass()) + " differs from 1");
  }
}

Symbol Envelope::sample(Rng& rng, const Alphabet& alphabet) const {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  Symbol last = alphabet.at(0);
  for (std::size_t i = 0;; ++i) {
    if (alphabet.size() && i >= *alphabet.size()) return last;
    const Symbol s = alphabet.at(i);
    const double p = pi(s, alphabet);
    if (p > 0.0) last = s;
    cumulative += p;
    if (u < cumulative) return s;
    // Remaining mass below rounding: return the last symbol with positive mass.
    if (i > tail.start && i > 64 && 1.0 - cumulative < 1e-15) return last;
  }
}

std::string to_string(Envelope::Provenance provenance) {
  switch (provenance) {
    case Envelope::Provenance::kUser: return "user";
    case Envelope::Provenance::kVar1Derived: return "var1-derived";
    case Envelope::Provenance::kExampleSpecific: return "example-specific";
  }
  return "user";
}

}  // namespace gmlab
