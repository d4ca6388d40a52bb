#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "calib/session/event.hpp"

namespace calib {

// Slider-style edges for decks whose confidence starts at 1/2.
inline const std::vector<double> kDefaultBinEdges{0.5, 0.55, 0.65, 0.75, 0.85, 0.95, 1.0};

struct CalibrationBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  std::optional<double> frequency_correct;  // empty when count == 0
  std::optional<double> mean_confidence;

  bool operator==(const CalibrationBin&) const = default;
};

struct CalibrationCurve {
  std::vector<CalibrationBin> bins;
  std::size_t unbinned = 0;  // choice events whose confidence falls outside the edges

  bool operator==(const CalibrationCurve&) const = default;
};

// Throws Error(kInvalidArgument) unless there are >= 2 strictly increasing
// finite edges inside [0, 1].
void validate_bin_edges(std::span<const double> edges);
// "0.5,0.75,1" -> {0.5, 0.75, 1}; validates the result.
std::vector<double> parse_bin_edges(std::string_view csv);

// Bins are [e_i, e_{i+1}); the last one also takes its upper edge. Only
// choice events count, keyed by clamped confidence.
CalibrationCurve calibration_curve(std::span<const PredictionEvent> events,
                                   std::span<const double> edges = kDefaultBinEdges);

struct KindStats {
  std::size_t predictions = 0;
  double total_points = 0.0;

  bool operator==(const KindStats&) const = default;
};

// Share of interval answers whose true value fell inside the submitted
// [L, U]. Not a scoring quantity; reported next to the target beta.
struct IntervalCoverage {
  std::size_t intervals = 0;
  std::size_t covered = 0;

  std::optional<double> rate() const;
  bool operator==(const IntervalCoverage&) const = default;
};

struct SessionStats {
  double total_points = 0.0;
  std::size_t predictions = 0;
  double mean_points = 0.0;
  std::map<std::string, KindStats> per_kind;
  IntervalCoverage coverage;

  bool operator==(const SessionStats&) const = default;
};

SessionStats summarize(std::span<const PredictionEvent> events);

nlohmann::json to_json(const CalibrationBin& bin);
nlohmann::json to_json(const CalibrationCurve& curve);
nlohmann::json to_json(const SessionStats& stats);

}  // namespace calib
