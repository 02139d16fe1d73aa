#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mgn {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateGeometry,
  kConditioning,
  kDivergence,
  kNonConvergence,
  kSchema,
  kIo,
  kNoArrival,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable failure in the library is reported as an mgn::Error.
/// The code lets callers (and the CLI) classify the failure without parsing
/// the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace mgn
