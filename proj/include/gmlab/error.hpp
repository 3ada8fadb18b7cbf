#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gmlab {

enum class ErrorKind {
  kConfig,
  kInvalidGfn,
  kInvalidContext,
  kOutsideAlphabet,
  kOutsideSubshift,
  kPrecisionUnavailable,
  kHeavyTail,
  kInvalidDistribution,
  kInstanceTooLarge,
  kNoUniqueSolution,
  kEnvelopeInvalid,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for an error kind: 2 config, 3 numeric precision, 4 instance too large.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gmlab
