#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tll {

// Failure categories shared by every module. The numeric values are part of
// the C ABI (see tllsta.h) and must not be reordered.
enum class ErrorCode : int {
  domain = 1,
  instability = 2,
  overflow = 3,
  singularity = 4,
  stiffness = 5,
  root_not_found = 6,
  config = 7,
  incomplete_grid = 8,
  linear_dependence = 9,
  degenerate_protocol = 10,
  consistency = 11,
  io = 12,
};

const char* to_string(ErrorCode code) noexcept;

// Every library failure is reported through this type. `detail` carries the
// one number a caller usually needs to act on: the crossing time of a
// singular trajectory, the exponent scale of an Airy overflow, the time at
// which a stability check failed. It is NaN when there is nothing to carry.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        double detail = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(message), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  double detail() const noexcept { return detail_; }
  bool has_detail() const noexcept { return !std::isnan(detail_); }

 private:
  ErrorCode code_;
  double detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message,
                              double detail = std::numeric_limits<double>::quiet_NaN()) {
  throw Error(code, message, detail);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace tll
