#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rtnsim {

enum class ErrorCode {
  InvalidArgument,
  Parse,        // config schema violation; message names the key path
  Overflow,     // disentangling coordinates left the |Re beta| <= 200 guard
  NonFinite,
  NoOptimum,
  Diverged,     // cross-checked propagators disagree beyond tolerance
  Io,
  Internal,
};

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw SimError(code, message);
}

}  // namespace rtnsim
