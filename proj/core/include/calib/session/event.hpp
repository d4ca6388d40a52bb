#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "calib/deck/deck.hpp"
#include "calib/deck/question.hpp"
#include "calib/scoring/types.hpp"

namespace calib {

// One scored answer. Serialized as one JSON-lines record of the session log.
struct PredictionEvent {
  std::string timestamp;  // RFC 3339, UTC
  std::string session_id;
  std::string question_id;
  QuestionKind question_kind = QuestionKind::kTrueFalse;
  Prediction prediction;
  std::optional<double> clamped_confidence;  // choice only
  std::optional<bool> correct;               // choice only
  std::optional<double> true_value;          // interval only
  double points = 0.0;
};

bool operator==(const PredictionEvent& a, const PredictionEvent& b);

struct ScoredPrediction {
  ScoreResult score;
  std::optional<double> clamped_confidence;
  std::optional<bool> correct;
  std::optional<double> true_value;
};

// Grades (choice) or checks (interval) the prediction, then applies the deck's
// rule: practical-log for choice kinds, the final Distance or Order-of-Magnitude
// rule for interval kinds.
ScoredPrediction score_prediction(const Deck& deck, const Question& question,
                                  const Prediction& prediction);

nlohmann::json prediction_to_json(const Prediction& prediction);
// The question kind decides how the selection payload is read. Throws
// Error(kShapeMismatch) on payloads that do not fit.
Prediction prediction_from_json(const nlohmann::json& payload, QuestionKind kind);

nlohmann::json to_json(const PredictionEvent& event);
// Throws Error(kCorruptLog) on missing or mistyped fields.
PredictionEvent event_from_json(const nlohmann::json& record);

}  // namespace calib
