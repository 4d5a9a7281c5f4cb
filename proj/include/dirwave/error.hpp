#pragma once

#include <stdexcept>
#include <string>

namespace dirwave {

// Mirrors the C API status codes in dirwave.h.
enum class ErrorCode : int {
  invalid_argument = 1,
  non_localizable = 2,
  non_finite = 3,
  not_converged = 4,
  envelope_singular = 5,
  null_spinor = 6,
  overflow = 7,
  no_convention = 8,
  out_of_range = 9,
  non_monotone = 10,
  io = 11,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace dirwave
