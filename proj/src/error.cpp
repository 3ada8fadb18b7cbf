#include "gmlab/error.hpp"

namespace gmlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kInvalidGfn: return "invalid-gfn";
    case ErrorKind::kInvalidContext: return "invalid-context";
    case ErrorKind::kOutsideAlphabet: return "outside-alphabet";
    case ErrorKind::kOutsideSubshift: return "outside-subshift";
    case ErrorKind::kPrecisionUnavailable: return "precision-unavailable";
    case ErrorKind::kHeavyTail: return "heavy-tail";
    case ErrorKind::kInvalidDistribution: return "invalid-distribution";
    case ErrorKind::kInstanceTooLarge: return "instance-too-large";
    case ErrorKind::kNoUniqueSolution: return "no-unique-solution";
    case ErrorKind::kEnvelopeInvalid: return "envelope-invalid";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kPrecisionUnavailable:
    case ErrorKind::kHeavyTail:
    case ErrorKind::kNoUniqueSolution:
      return 3;
    case ErrorKind::kInstanceTooLarge:
      return 4;
    default:
      return 2;
  }
}

}  // namespace gmlab
