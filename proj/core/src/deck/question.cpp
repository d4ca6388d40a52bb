#include "calib/deck/question.hpp"

#include <array>
#include <utility>

namespace calib {
namespace {

constexpr std::array<std::pair<QuestionKind, std::string_view>, 7> kKindNames{{
    {QuestionKind::kTrueFalse, "true_false"},
    {QuestionKind::kChoose1OfN, "choose_1_of_n"},
    {QuestionKind::kChooseKOfN, "choose_k_of_n"},
    {QuestionKind::kFreeText, "free_text"},
    {QuestionKind::kNumericExact, "numeric_exact"},
    {QuestionKind::kIntervalDistance, "interval_distance"},
    {QuestionKind::kIntervalMagnitude, "interval_magnitude"},
}};

}  // namespace

std::string_view to_string(QuestionKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<QuestionKind> question_kind_from_string(std::string_view name) {
  for (const auto& [kind, kind_name] : kKindNames) {
    if (kind_name == name) return kind;
  }
  return std::nullopt;
}

bool is_interval(QuestionKind kind) {
  return kind == QuestionKind::kIntervalDistance || kind == QuestionKind::kIntervalMagnitude;
}

bool is_choice(QuestionKind kind) { return !is_interval(kind); }

}  // namespace calib
