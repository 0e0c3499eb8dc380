#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blinkforge {

// Failure categories shared by every module. The CLI maps these onto exit
// codes (see cli.hpp), so keep the list short and stable.
enum class ErrorKind {
  InvalidArgument,   // caller passed a parameter outside its domain
  InvalidInput,      // data violates a precondition (length, finiteness, ...)
  InvalidChannel,    // recording has the wrong channel kind
  InvalidSegment,    // peak segment too short / malformed
  DegenerateShape,   // tent tangents do not intersect meaningfully
  DegenerateInput,   // quantity undefined for constant input (Hjorth)
  ConfigError,       // cull config references unknown features, bad JSON
  InvalidResponse,   // survey item out of range or missing
  SingularDesign,    // ridge normal equations singular at lambda = 0
  TooManyFeatures,   // exact Shapley enumeration beyond its limit
  ParseError,        // malformed file contents
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace blinkforge
