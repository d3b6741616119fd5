#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coarsecoh {

enum class ErrorKind {
  PointOutsideWindow,
  WindowTooLarge,
  InvalidArgument,
  ParseError,
  NotAComplex,
  InstanceTooLarge,
  NotDownwardClosed,
  CoefficientsInfinite,
  CoefficientMismatch,
  MapNotEvaluable,
  MapsNotClose,
  EnumerationCapExceeded,
  CoverNotVerified,
  ConfigError,
};

inline std::string_view toString(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::PointOutsideWindow: return "point-outside-window";
  case ErrorKind::WindowTooLarge: return "window-too-large";
  case ErrorKind::InvalidArgument: return "invalid-argument";
  case ErrorKind::ParseError: return "parse-error";
  case ErrorKind::NotAComplex: return "not-a-complex";
  case ErrorKind::InstanceTooLarge: return "instance-too-large";
  case ErrorKind::NotDownwardClosed: return "not-downward-closed";
  case ErrorKind::CoefficientsInfinite: return "coefficients-infinite";
  case ErrorKind::CoefficientMismatch: return "coefficient-mismatch";
  case ErrorKind::MapNotEvaluable: return "map-not-evaluable-on-window";
  case ErrorKind::MapsNotClose: return "maps-not-close";
  case ErrorKind::EnumerationCapExceeded: return "enumeration-cap-exceeded";
  case ErrorKind::CoverNotVerified: return "cover-not-verified";
  case ErrorKind::ConfigError: return "config-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(toString(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string &what) {
  if (!condition) fail(kind, what);
}

} // namespace coarsecoh
