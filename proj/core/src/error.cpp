#include "calib/error.hpp"

namespace calib {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kDomain: return "domain_error";
    case ErrorCode::kInfiniteScore: return "infinite_score";
    case ErrorCode::kInvalidDeck: return "invalid_deck";
    case ErrorCode::kShapeMismatch: return "shape_mismatch";
    case ErrorCode::kInvalidInterval: return "invalid_interval";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kDuplicate: return "duplicate";
    case ErrorCode::kCorruptLog: return "corrupt_log";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

}  // namespace calib
