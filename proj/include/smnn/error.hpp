#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smnn {

enum class ErrorKind {
  DegenerateSupport,
  DimensionTooSmall,
  DimensionMismatch,
  SingularSimplex,
  NoVisibleFacet,
  InvalidMargin,
  ZeroNorm,
  OutsideBall,
  NoContainingVirtualSimplex,
  InvalidCount,
  TooManyClusters,
  ParseError,
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so the CLI can report
/// the module error name and map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace smnn
