#include "tllsta/error.hpp"

namespace tll {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::instability: return "instability";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::singularity: return "singularity";
    case ErrorCode::stiffness: return "stiffness";
    case ErrorCode::root_not_found: return "root_not_found";
    case ErrorCode::config: return "config";
    case ErrorCode::incomplete_grid: return "incomplete_grid";
    case ErrorCode::linear_dependence: return "linear_dependence";
    case ErrorCode::degenerate_protocol: return "degenerate_protocol";
    case ErrorCode::consistency: return "consistency";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace tll
