#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hopfbif {

/// Failure categories reported by the library. Every thrown `hopfbif::Error`
/// carries one of these so callers (notably the CLI) can map them to exit codes.
enum class ErrorKind {
  InvalidArgument,
  PoleDegenerate,
  InfeasibleGeometry,
  InfeasibleAmd,
  IsotropicDegenerate,
  SecondKindDegenerate,
  SecularFrequencyDegenerate,
  DegenerateConstant,
  EmptyDomain,
  EmptyLevel,
  StepFailure,
  LeftDomain,
  Schema,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hopfbif
