#include "geotomo/error.hpp"

namespace geotomo {

const char* toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::DuplicateDirection: return "duplicate-direction";
    case ErrorCode::Span: return "span";
    case ErrorCode::UnsupportedDimension: return "unsupported-dimension";
    case ErrorCode::InvalidBody: return "invalid-body";
    case ErrorCode::UnboundedPolytope: return "unbounded-polytope";
    case ErrorCode::Evenness: return "evenness";
    case ErrorCode::Closure: return "closure";
    case ErrorCode::DegenerateMeasure: return "degenerate-measure";
    case ErrorCode::DegenerateZonotope: return "degenerate-zonotope";
    case ErrorCode::PositiveHull: return "positive-hull";
    case ErrorCode::Convergence: return "convergence";
    case ErrorCode::IncompatibleKind: return "incompatible-kind";
    case ErrorCode::InvalidData: return "invalid-data";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace geotomo
