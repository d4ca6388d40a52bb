#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "calib/deck/deck.hpp"
#include "calib/session/calibration.hpp"
#include "calib/session/event.hpp"

namespace calib::trainer {

enum class AgentKind { kCalibrated, kOverconfident, kUnderconfident, kRandom };

std::string_view to_string(AgentKind kind);
std::optional<AgentKind> agent_kind_from_string(std::string_view name);

// A simulated trainee. Each round draws a latent probability of being right,
// uniform over [p_rand, p_max] of the question, realizes correctness from it
// and states distortion(latent). Over- and underconfident agents use p^gamma,
// which fixes 0 and 1 and is monotone.
struct SimAgent {
  AgentKind kind = AgentKind::kCalibrated;
  double gamma = 1.0;
  std::uint64_t seed = 1;

  static SimAgent make(AgentKind kind, std::uint64_t seed, std::optional<double> gamma = std::nullopt);
  double distortion(double p) const;
};

inline constexpr double kOverconfidentGamma = 0.5;
inline constexpr double kUnderconfidentGamma = 2.0;

struct SimulationResult {
  std::vector<PredictionEvent> events;
  SessionStats stats;
  CalibrationCurve curve;
};

// Cycles through the deck's choice questions for n rounds; question ids are
// suffixed with "@round". Error(kInvalidDeck) if the deck has no choice question.
// Timestamps come from `timestamp`, so fixtures can pin them.
SimulationResult simulate(const Deck& deck, const SimAgent& agent, std::size_t rounds,
                          const std::string& timestamp,
                          const std::vector<double>& edges = kDefaultBinEdges);

}  // namespace calib::trainer
