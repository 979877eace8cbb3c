#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace egress {

enum class ErrorCode {
  NoExit,
  NotEnoughEmptyPatches,
  InvalidConfig,
  UnknownPreset,
  Io,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Runtime error raised by the engine and the experiment harness.
class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace egress
