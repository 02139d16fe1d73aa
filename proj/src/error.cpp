#include "mgn/error.hpp"

namespace mgn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDegenerateGeometry: return "degenerate_geometry";
    case ErrorCode::kConditioning: return "conditioning";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kNonConvergence: return "non_convergence";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kNoArrival: return "no_arrival";
  }
  return "unknown";
}

}  // namespace mgn
