#include "smnn/error.hpp"

namespace smnn {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateSupport: return "DegenerateSupport";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularSimplex: return "SingularSimplex";
    case ErrorKind::NoVisibleFacet: return "NoVisibleFacet";
    case ErrorKind::InvalidMargin: return "InvalidMargin";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::OutsideBall: return "OutsideBall";
    case ErrorKind::NoContainingVirtualSimplex: return "NoContainingVirtualSimplex";
    case ErrorKind::InvalidCount: return "InvalidCount";
    case ErrorKind::TooManyClusters: return "TooManyClusters";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace smnn
