#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace berezin {

enum class ErrorCode {
  NotHermitian,
  NotPositive,
  NotCommuting,
  NoConvergence,
  DimensionMismatch,
  PointOutOfDomain,
  ParamOutOfRange,
  UnknownIneqId,
  BadInput,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for every failure the library reports; callers that
/// need to branch (the CLI maps codes to exit statuses) inspect code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace berezin
