#include "calib/deck/grading.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "calib/error.hpp"

namespace calib {
namespace {

[[noreturn]] void shape_mismatch(const Question& question, const char* expected) {
  throw Error(ErrorCode::kShapeMismatch, "question '" + question.id + "' (" +
                                             std::string(to_string(question.kind)) +
                                             ") expects " + expected);
}

template <typename T>
const T& selection_as(const Question& question, const ChoicePrediction& prediction,
                      const char* expected) {
  const T* value = std::get_if<T>(&prediction.selection);
  if (value == nullptr) shape_mismatch(question, expected);
  return *value;
}

bool is_integral(double v) { return std::isfinite(v) && std::trunc(v) == v; }

bool numbers_match(double submitted, double answer) {
  if (is_integral(submitted) && is_integral(answer)) {
    return std::llround(submitted) == std::llround(answer);
  }
  return submitted == answer;
}

}  // namespace

std::string normalize_answer_text(std::string_view text) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  std::string out(text.substr(begin, end - begin));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool grade_choice(const Question& question, const ChoicePrediction& prediction) {
  switch (question.kind) {
    case QuestionKind::kTrueFalse: {
      const auto& pick = selection_as<TruthPick>(question, prediction, "a true/false selection");
      return pick.value == std::get<TruthAnswer>(question.answer).value;
    }
    case QuestionKind::kChoose1OfN: {
      const auto& pick = selection_as<OptionPick>(question, prediction, "one option index");
      if (pick.index >= question.options.size()) shape_mismatch(question, "a valid option index");
      return pick.index == std::get<OptionAnswer>(question.answer).index;
    }
    case QuestionKind::kChooseKOfN: {
      const auto& picks = selection_as<OptionSet>(question, prediction, "a set of option indices");
      const std::set<std::size_t> unique(picks.indices.begin(), picks.indices.end());
      if (unique.size() != picks.indices.size() || unique.size() != question.k ||
          (!unique.empty() && *unique.rbegin() >= question.options.size())) {
        shape_mismatch(question, "exactly k distinct valid option indices");
      }
      return unique.count(std::get<OptionAnswer>(question.answer).index) == 1;
    }
    case QuestionKind::kFreeText: {
      const auto& entry = selection_as<TextEntry>(question, prediction, "a text answer");
      const std::string submitted = normalize_answer_text(entry.text);
      const auto& acceptable = std::get<TextAnswer>(question.answer).acceptable;
      return std::any_of(acceptable.begin(), acceptable.end(), [&](const std::string& a) {
        return normalize_answer_text(a) == submitted;
      });
    }
    case QuestionKind::kNumericExact: {
      const auto& entry = selection_as<NumberEntry>(question, prediction, "a numeric answer");
      return numbers_match(entry.value, std::get<NumberAnswer>(question.answer).value);
    }
    case QuestionKind::kIntervalDistance:
    case QuestionKind::kIntervalMagnitude:
      shape_mismatch(question, "an interval prediction");
  }
  shape_mismatch(question, "a known question kind");
}

double derive_p_rand(const Question& question) {
  switch (question.kind) {
    case QuestionKind::kTrueFalse:
      return 0.5;
    case QuestionKind::kChoose1OfN:
      return 1.0 / static_cast<double>(question.options.size());
    case QuestionKind::kChooseKOfN:
      return static_cast<double>(question.k) / static_cast<double>(question.options.size());
    case QuestionKind::kFreeText:
    case QuestionKind::kNumericExact:
      if (!question.p_rand) {
        throw Error(ErrorCode::kInvalidArgument,
                    "question '" + question.id + "' is open-ended and needs an explicit p_rand");
      }
      return *question.p_rand;
    case QuestionKind::kIntervalDistance:
    case QuestionKind::kIntervalMagnitude:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "question '" + question.id + "' is an interval question and has no p_rand");
}

void check_interval_prediction(const Question& question, const IntervalPrediction& prediction) {
  if (!is_interval(question.kind)) {
    throw Error(ErrorCode::kShapeMismatch,
                "question '" + question.id + "' expects a choice prediction");
  }
  if (!std::isfinite(prediction.lower) || !std::isfinite(prediction.upper)) {
    throw Error(ErrorCode::kInvalidInterval, "interval bounds must be finite");
  }
  if (prediction.lower > prediction.upper) {
    throw Error(ErrorCode::kInvalidInterval, "interval lower bound exceeds upper bound");
  }
  if (question.kind == QuestionKind::kIntervalMagnitude && !(prediction.lower > 0.0)) {
    throw Error(ErrorCode::kInvalidInterval, "magnitude questions need a positive lower bound");
  }
}

}  // namespace calib
