#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace calib {

enum class ErrorCode {
  kInvalidArgument,   // value violates a type invariant
  kDimensionMismatch,
  kDomain,            // input outside the rule's mathematical domain
  kInfiniteScore,     // log score of an impossible outcome
  kInvalidDeck,
  kShapeMismatch,     // prediction payload does not fit the question kind
  kInvalidInterval,   // submitted bounds unusable for the question's rule
  kNotFound,
  kDuplicate,
  kCorruptLog,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace calib
