#include "calib/trainer/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "calib/deck/grading.hpp"
#include "calib/error.hpp"

namespace calib::trainer {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kCalibrated: return "calibrated";
    case AgentKind::kOverconfident: return "overconfident";
    case AgentKind::kUnderconfident: return "underconfident";
    case AgentKind::kRandom: return "random";
  }
  return "calibrated";
}

std::optional<AgentKind> agent_kind_from_string(std::string_view name) {
  for (auto kind : {AgentKind::kCalibrated, AgentKind::kOverconfident, AgentKind::kUnderconfident,
                    AgentKind::kRandom}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

SimAgent SimAgent::make(AgentKind kind, std::uint64_t seed, std::optional<double> gamma) {
  SimAgent agent{kind, 1.0, seed};
  if (kind == AgentKind::kOverconfident) agent.gamma = gamma.value_or(kOverconfidentGamma);
  if (kind == AgentKind::kUnderconfident) agent.gamma = gamma.value_or(kUnderconfidentGamma);
  if (!(agent.gamma > 0.0) || !std::isfinite(agent.gamma)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must be positive");
  }
  return agent;
}

double SimAgent::distortion(double p) const {
  return gamma == 1.0 ? p : std::pow(p, gamma);
}

namespace {

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// A selection that grades as `correct` for the question.
Selection selection_for(const Question& q, bool correct) {
  switch (q.kind) {
    case QuestionKind::kTrueFalse: {
      const bool truth = std::get<TruthAnswer>(q.answer).value;
      return TruthPick{correct ? truth : !truth};
    }
    case QuestionKind::kChoose1OfN: {
      const std::size_t right = std::get<OptionAnswer>(q.answer).index;
      return OptionPick{correct ? right : (right + 1) % q.options.size()};
    }
    case QuestionKind::kChooseKOfN: {
      const std::size_t right = std::get<OptionAnswer>(q.answer).index;
      OptionSet set;
      if (correct) set.indices.push_back(right);
      for (std::size_t i = 0; i < q.options.size() && set.indices.size() < q.k; ++i) {
        if (i != right) set.indices.push_back(i);
      }
      return set;
    }
    case QuestionKind::kFreeText: {
      const auto& acceptable = std::get<TextAnswer>(q.answer).acceptable;
      if (correct) return TextEntry{acceptable.front()};
      std::string wrong = "not " + acceptable.front();
      while (std::find_if(acceptable.begin(), acceptable.end(), [&](const std::string& a) {
               return normalize_answer_text(a) == normalize_answer_text(wrong);
             }) != acceptable.end()) {
        wrong += "!";
      }
      return TextEntry{wrong};
    }
    case QuestionKind::kNumericExact: {
      const double value = std::get<NumberAnswer>(q.answer).value;
      return NumberEntry{correct ? value : value + 1.0};
    }
    case QuestionKind::kIntervalDistance:
    case QuestionKind::kIntervalMagnitude:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "not a choice question: " + q.id);
}

}  // namespace

SimulationResult simulate(const Deck& deck, const SimAgent& agent, std::size_t rounds,
                          const std::string& timestamp, const std::vector<double>& edges) {
  std::vector<const Question*> pool;
  for (const auto& q : deck.questions) {
    if (is_choice(q.kind)) pool.push_back(&q);
  }
  if (pool.empty()) {
    throw Error(ErrorCode::kInvalidDeck, "deck '" + deck.id + "' has no choice questions to simulate");
  }

  Draws draws(agent.seed);
  SimulationResult result;
  result.events.reserve(rounds);
  const std::string session_id = "sim-" + std::string(to_string(agent.kind)) + "-" + std::to_string(agent.seed);
  for (std::size_t round = 0; round < rounds; ++round) {
    const Question& q = *pool[round % pool.size()];
    const ChoiceScoringParams params = choice_params(deck, q);
    const double latent = params.p_rand + (params.p_max - params.p_rand) * draws.unit();
    const bool correct = draws.unit() < latent;
    const double stated = agent.kind == AgentKind::kRandom ? params.p_rand : agent.distortion(latent);

    const ChoicePrediction prediction{selection_for(q, correct), stated};
    const ScoredPrediction scored = score_prediction(deck, q, prediction);
    PredictionEvent event;
    event.timestamp = timestamp;
    event.session_id = session_id;
    event.question_id = q.id + "@" + std::to_string(round);
    event.question_kind = q.kind;
    event.prediction = prediction;
    event.clamped_confidence = scored.clamped_confidence;
    event.correct = scored.correct;
    event.points = scored.score.points;
    result.events.push_back(std::move(event));
  }
  result.stats = summarize(result.events);
  result.curve = calibration_curve(result.events, edges);
  return result;
}

}  // namespace calib::trainer
