#pragma once

#include <string>
#include <string_view>

#include "calib/deck/question.hpp"

namespace calib {

// Lowercase (ASCII) and strip surrounding whitespace.
std::string normalize_answer_text(std::string_view text);

// Whether a choice prediction's selection is correct. Throws
// Error(kShapeMismatch) when the selection does not fit the question kind.
bool grade_choice(const Question& question, const ChoicePrediction& prediction);

// Probability of being right by guessing uniformly: 1/2, 1/n, k/n, or the
// question's explicit value for open-ended kinds (Error(kInvalidArgument) if absent).
double derive_p_rand(const Question& question);

// Throws Error(kInvalidInterval) unless L <= U (and L > 0 for magnitude questions).
void check_interval_prediction(const Question& question, const IntervalPrediction& prediction);

}  // namespace calib
