#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "calib/scoring/types.hpp"

namespace calib {

enum class QuestionKind {
  kTrueFalse,
  kChoose1OfN,
  kChooseKOfN,
  kFreeText,
  kNumericExact,
  kIntervalDistance,
  kIntervalMagnitude,
};

std::string_view to_string(QuestionKind kind);
std::optional<QuestionKind> question_kind_from_string(std::string_view name);
bool is_choice(QuestionKind kind);
bool is_interval(QuestionKind kind);

// Answer specifications, one per question family.
struct TruthAnswer {
  bool value = true;
};
struct OptionAnswer {
  std::size_t index = 0;  // the single option marked correct
};
struct TextAnswer {
  std::vector<std::string> acceptable;
};
struct NumberAnswer {
  double value = 0.0;
};
struct IntervalAnswer {
  double true_value = 0.0;
};

using AnswerSpec = std::variant<TruthAnswer, OptionAnswer, TextAnswer, NumberAnswer, IntervalAnswer>;

struct Question {
  std::string id;
  std::string prompt;
  QuestionKind kind = QuestionKind::kTrueFalse;
  std::vector<std::string> options;
  std::size_t k = 1;  // choose_k_of_n selection count
  AnswerSpec answer;
  double beta = kDefaultBeta;      // interval kinds
  std::optional<double> p_rand;    // explicit for open-ended kinds
  std::optional<double> c;         // per-question scale override (interval kinds)
};

// Selection payloads for choice predictions.
struct TruthPick {
  bool value = true;
};
struct OptionPick {
  std::size_t index = 0;
};
struct OptionSet {
  std::vector<std::size_t> indices;
};
struct TextEntry {
  std::string text;
};
struct NumberEntry {
  double value = 0.0;
};

using Selection = std::variant<TruthPick, OptionPick, OptionSet, TextEntry, NumberEntry>;

struct ChoicePrediction {
  Selection selection;
  double confidence = 0.5;  // stated, before clamping
};

struct IntervalPrediction {
  double lower = 0.0;
  double upper = 0.0;
};

using Prediction = std::variant<ChoicePrediction, IntervalPrediction>;

}  // namespace calib
