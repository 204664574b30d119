#include "toroid/error.hpp"

namespace toroid {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kDegenerateToroid: return "degenerate toroid";
    case ErrorCode::kNearSingularArgument: return "near-singular argument";
    case ErrorCode::kOverflow: return "overflow";
    case ErrorCode::kTruncation: return "truncation";
    case ErrorCode::kOutOfRegion: return "out of region";
    case ErrorCode::kCoincidentPoints: return "coincident points";
    case ErrorCode::kCoordinateSingularity: return "coordinate singularity";
    case ErrorCode::kNoRoot: return "no root";
    case ErrorCode::kRangeExceeded: return "range exceeded";
    case ErrorCode::kSolver: return "solver";
    case ErrorCode::kMesh: return "mesh";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace toroid
