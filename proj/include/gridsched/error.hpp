#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridsched {

enum class ErrorCode {
  Io,
  Parse,
  Schema,
  Validation,
  InvalidModel,
  UnknownRow,
  DimensionMismatch,
  PatternLimit,
  Solver,
  Argument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The C API maps
/// the code onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gridsched
