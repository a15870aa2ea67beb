#pragma once

#include <stdexcept>
#include <string>

namespace qdomain {

enum class ErrorCode {
  invalid_argument = 1,
  aliasing = 2,
  truncation = 3,
  positivity_lost = 4,
  overflow_guard = 5,
  under_resolved = 6,
  not_in_hardy_class = 7,
  schema = 8,
  io = 9,
  too_expensive = 10,
};

/// Base exception for every failure raised by the numerical core. The C API
/// maps the code onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace qdomain
