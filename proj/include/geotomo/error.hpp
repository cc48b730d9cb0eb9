#pragma once

#include <stdexcept>
#include <string>

namespace geotomo {

enum class ErrorCode {
  InvalidParameter,
  DuplicateDirection,
  Span,
  UnsupportedDimension,
  InvalidBody,
  UnboundedPolytope,
  Evenness,
  Closure,
  DegenerateMeasure,
  DegenerateZonotope,
  PositiveHull,
  Convergence,
  IncompatibleKind,
  InvalidData,
  Io,
};

const char* toString(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (notably the CLI) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(toString(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace geotomo
