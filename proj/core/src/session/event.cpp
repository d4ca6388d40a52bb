#include "calib/session/event.hpp"

#include <cmath>
#include <type_traits>

#include "calib/deck/grading.hpp"
#include "calib/error.hpp"
#include "calib/scoring/choice.hpp"
#include "calib/scoring/interval.hpp"

namespace calib {

using nlohmann::json;

namespace {

bool same_selection(const Selection& a, const Selection& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&b](const auto& lhs) {
        using T = std::decay_t<decltype(lhs)>;
        const T& rhs = std::get<T>(b);
        if constexpr (std::is_same_v<T, TruthPick>) return lhs.value == rhs.value;
        if constexpr (std::is_same_v<T, OptionPick>) return lhs.index == rhs.index;
        if constexpr (std::is_same_v<T, OptionSet>) return lhs.indices == rhs.indices;
        if constexpr (std::is_same_v<T, TextEntry>) return lhs.text == rhs.text;
        if constexpr (std::is_same_v<T, NumberEntry>) return lhs.value == rhs.value;
      },
      a);
}

bool same_prediction(const Prediction& a, const Prediction& b) {
  if (a.index() != b.index()) return false;
  if (const auto* choice = std::get_if<ChoicePrediction>(&a)) {
    const auto& other = std::get<ChoicePrediction>(b);
    return choice->confidence == other.confidence &&
           same_selection(choice->selection, other.selection);
  }
  const auto& interval = std::get<IntervalPrediction>(a);
  const auto& other = std::get<IntervalPrediction>(b);
  return interval.lower == other.lower && interval.upper == other.upper;
}

[[noreturn]] void bad_payload(QuestionKind kind, const std::string& what) {
  throw Error(ErrorCode::kShapeMismatch,
              std::string(to_string(kind)) + " prediction needs " + what);
}

double finite_number(const json& value, QuestionKind kind, const char* what) {
  if (!value.is_number()) bad_payload(kind, what);
  const double number = value.get<double>();
  if (!std::isfinite(number)) bad_payload(kind, what);
  return number;
}

std::size_t option_index(const json& value, QuestionKind kind) {
  if (!(value.is_number_integer() || value.is_number_unsigned()) || value.get<long long>() < 0) {
    bad_payload(kind, "a non-negative option index");
  }
  return value.get<std::size_t>();
}

}  // namespace

bool operator==(const PredictionEvent& a, const PredictionEvent& b) {
  return a.timestamp == b.timestamp && a.session_id == b.session_id &&
         a.question_id == b.question_id && a.question_kind == b.question_kind &&
         same_prediction(a.prediction, b.prediction) &&
         a.clamped_confidence == b.clamped_confidence && a.correct == b.correct &&
         a.true_value == b.true_value && a.points == b.points;
}

ScoredPrediction score_prediction(const Deck& deck, const Question& question,
                                  const Prediction& prediction) {
  ScoredPrediction scored;
  if (is_choice(question.kind)) {
    const auto* choice = std::get_if<ChoicePrediction>(&prediction);
    if (choice == nullptr) {
      throw Error(ErrorCode::kShapeMismatch,
                  "question '" + question.id + "' expects a choice prediction");
    }
    const ChoiceScoringParams params = choice_params(deck, question);
    const bool correct = grade_choice(question, *choice);
    scored.clamped_confidence = clamp_probability(choice->confidence, params);
    scored.correct = correct;
    scored.score = practical_log_choice_score(*scored.clamped_confidence, correct, params);
    return scored;
  }

  const auto* interval = std::get_if<IntervalPrediction>(&prediction);
  if (interval == nullptr) {
    throw Error(ErrorCode::kShapeMismatch,
                "question '" + question.id + "' expects an interval prediction");
  }
  check_interval_prediction(question, *interval);
  const double truth = std::get<IntervalAnswer>(question.answer).true_value;
  const IntervalForecast forecast{interval->lower, interval->upper, question.beta};
  const IntervalScoringParams params = interval_params(deck, question);
  scored.true_value = truth;
  scored.score = question.kind == QuestionKind::kIntervalMagnitude
                     ? mag_score_final(truth, forecast, params)
                     : dist_score_final(truth, forecast, params);
  return scored;
}

json prediction_to_json(const Prediction& prediction) {
  if (const auto* interval = std::get_if<IntervalPrediction>(&prediction)) {
    return {{"lower", interval->lower}, {"upper", interval->upper}};
  }
  const auto& choice = std::get<ChoicePrediction>(prediction);
  json selection = std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TruthPick>) return s.value;
        if constexpr (std::is_same_v<T, OptionPick>) return s.index;
        if constexpr (std::is_same_v<T, OptionSet>) return s.indices;
        if constexpr (std::is_same_v<T, TextEntry>) return s.text;
        if constexpr (std::is_same_v<T, NumberEntry>) return s.value;
      },
      choice.selection);
  return {{"selection", std::move(selection)}, {"confidence", choice.confidence}};
}

Prediction prediction_from_json(const json& payload, QuestionKind kind) {
  if (!payload.is_object()) bad_payload(kind, "a JSON object");
  if (is_interval(kind)) {
    if (!payload.contains("lower") || !payload.contains("upper")) {
      bad_payload(kind, "numeric 'lower' and 'upper'");
    }
    return IntervalPrediction{finite_number(payload["lower"], kind, "a finite 'lower'"),
                              finite_number(payload["upper"], kind, "a finite 'upper'")};
  }
  if (!payload.contains("selection") || !payload.contains("confidence")) {
    bad_payload(kind, "'selection' and 'confidence'");
  }
  ChoicePrediction choice;
  choice.confidence = finite_number(payload["confidence"], kind, "a numeric 'confidence'");
  const json& selection = payload["selection"];
  switch (kind) {
    case QuestionKind::kTrueFalse:
      if (!selection.is_boolean()) bad_payload(kind, "a boolean selection");
      choice.selection = TruthPick{selection.get<bool>()};
      break;
    case QuestionKind::kChoose1OfN:
      choice.selection = OptionPick{option_index(selection, kind)};
      break;
    case QuestionKind::kChooseKOfN: {
      if (!selection.is_array()) bad_payload(kind, "an array of option indices");
      OptionSet set;
      for (const json& index : selection) set.indices.push_back(option_index(index, kind));
      choice.selection = std::move(set);
      break;
    }
    case QuestionKind::kFreeText:
      if (!selection.is_string()) bad_payload(kind, "a text selection");
      choice.selection = TextEntry{selection.get<std::string>()};
      break;
    case QuestionKind::kNumericExact:
      choice.selection = NumberEntry{finite_number(selection, kind, "a numeric selection")};
      break;
    case QuestionKind::kIntervalDistance:
    case QuestionKind::kIntervalMagnitude:
      break;
  }
  return choice;
}

json to_json(const PredictionEvent& event) {
  json record = {
      {"timestamp", event.timestamp},
      {"session_id", event.session_id},
      {"question_id", event.question_id},
      {"question_kind", to_string(event.question_kind)},
      {"prediction", prediction_to_json(event.prediction)},
  };
  if (event.clamped_confidence) record["clamped_confidence"] = *event.clamped_confidence;
  if (event.correct) record["correct"] = *event.correct;
  if (event.true_value) record["true_value"] = *event.true_value;
  record["points"] = event.points;
  return record;
}

PredictionEvent event_from_json(const json& record) {
  auto fail = [](const std::string& what) -> PredictionEvent {
    throw Error(ErrorCode::kCorruptLog, what);
  };
  if (!record.is_object()) return fail("event must be a JSON object");
  for (const char* field : {"timestamp", "session_id", "question_id", "question_kind"}) {
    if (!record.contains(field) || !record[field].is_string()) {
      return fail(std::string("missing string field '") + field + "'");
    }
  }
  if (!record.contains("points") || !record["points"].is_number()) {
    return fail("missing numeric field 'points'");
  }
  if (!record.contains("prediction")) return fail("missing field 'prediction'");

  PredictionEvent event;
  event.timestamp = record["timestamp"].get<std::string>();
  event.session_id = record["session_id"].get<std::string>();
  event.question_id = record["question_id"].get<std::string>();
  const auto kind = question_kind_from_string(record["question_kind"].get<std::string>());
  if (!kind) return fail("unknown question_kind");
  event.question_kind = *kind;
  try {
    event.prediction = prediction_from_json(record["prediction"], *kind);
  } catch (const Error& e) {
    return fail(std::string("bad prediction: ") + e.what());
  }
  event.points = record["points"].get<double>();
  if (record.contains("clamped_confidence")) {
    if (!record["clamped_confidence"].is_number()) return fail("clamped_confidence must be numeric");
    event.clamped_confidence = record["clamped_confidence"].get<double>();
  }
  if (record.contains("correct")) {
    if (!record["correct"].is_boolean()) return fail("correct must be boolean");
    event.correct = record["correct"].get<bool>();
  }
  if (record.contains("true_value")) {
    if (!record["true_value"].is_number()) return fail("true_value must be numeric");
    event.true_value = record["true_value"].get<double>();
  }
  if (is_choice(event.question_kind) && (!event.clamped_confidence || !event.correct)) {
    return fail("choice events need clamped_confidence and correct");
  }
  if (is_interval(event.question_kind) && !event.true_value) {
    return fail("interval events need true_value");
  }
  return event;
}

}  // namespace calib
