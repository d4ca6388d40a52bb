#include "calib/session/calibration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "calib/error.hpp"

namespace calib {

using nlohmann::json;

void validate_bin_edges(std::span<const double> edges) {
  if (edges.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two bin edges");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i]) || edges[i] < 0.0 || edges[i] > 1.0) {
      throw Error(ErrorCode::kInvalidArgument, "bin edges must lie in [0, 1]");
    }
    if (i > 0 && !(edges[i] > edges[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "bin edges must be strictly increasing");
    }
  }
}

std::vector<double> parse_bin_edges(std::string_view csv) {
  std::vector<double> edges;
  while (true) {
    const auto comma = csv.find(',');
    std::string_view token = csv.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
      throw Error(ErrorCode::kInvalidArgument, "bad bin edge '" + std::string(token) + "'");
    }
    edges.push_back(value);
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  validate_bin_edges(edges);
  return edges;
}

CalibrationCurve calibration_curve(std::span<const PredictionEvent> events,
                                   std::span<const double> edges) {
  validate_bin_edges(edges);
  const std::size_t n_bins = edges.size() - 1;
  std::vector<double> confidence_sum(n_bins, 0.0);
  std::vector<std::size_t> correct(n_bins, 0);

  CalibrationCurve curve;
  curve.bins.resize(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) {
    curve.bins[i].lower = edges[i];
    curve.bins[i].upper = edges[i + 1];
  }

  for (const PredictionEvent& event : events) {
    if (!event.clamped_confidence || !event.correct) continue;
    const double c = *event.clamped_confidence;
    if (c < edges.front() || c > edges.back()) {
      ++curve.unbinned;
      continue;
    }
    // First edge strictly above c; the top edge closes the last bin.
    auto it = std::upper_bound(edges.begin(), edges.end(), c);
    std::size_t bin = it == edges.end() ? n_bins - 1
                                        : static_cast<std::size_t>(it - edges.begin()) - 1;
    ++curve.bins[bin].count;
    confidence_sum[bin] += c;
    if (*event.correct) ++correct[bin];
  }

  for (std::size_t i = 0; i < n_bins; ++i) {
    auto& bin = curve.bins[i];
    if (bin.count == 0) continue;
    const auto n = static_cast<double>(bin.count);
    bin.frequency_correct = static_cast<double>(correct[i]) / n;
    bin.mean_confidence = confidence_sum[i] / n;
  }
  return curve;
}

std::optional<double> IntervalCoverage::rate() const {
  if (intervals == 0) return std::nullopt;
  return static_cast<double>(covered) / static_cast<double>(intervals);
}

SessionStats summarize(std::span<const PredictionEvent> events) {
  SessionStats stats;
  for (const PredictionEvent& event : events) {
    stats.total_points += event.points;
    ++stats.predictions;
    auto& kind = stats.per_kind[std::string(to_string(event.question_kind))];
    ++kind.predictions;
    kind.total_points += event.points;
    if (const auto* interval = std::get_if<IntervalPrediction>(&event.prediction);
        interval != nullptr && event.true_value) {
      ++stats.coverage.intervals;
      if (interval->lower <= *event.true_value && *event.true_value <= interval->upper) {
        ++stats.coverage.covered;
      }
    }
  }
  if (stats.predictions > 0) {
    stats.mean_points = stats.total_points / static_cast<double>(stats.predictions);
  }
  return stats;
}

namespace {

json optional_number(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

}  // namespace

json to_json(const CalibrationBin& bin) {
  return {{"lower", bin.lower},
          {"upper", bin.upper},
          {"count", bin.count},
          {"frequency_correct", optional_number(bin.frequency_correct)},
          {"mean_confidence", optional_number(bin.mean_confidence)},
          {"empty", bin.count == 0}};
}

json to_json(const CalibrationCurve& curve) {
  json bins = json::array();
  for (const auto& bin : curve.bins) bins.push_back(to_json(bin));
  return {{"bins", std::move(bins)}, {"unbinned", curve.unbinned}};
}

json to_json(const SessionStats& stats) {
  json per_kind = json::object();
  for (const auto& [kind, entry] : stats.per_kind) {
    per_kind[kind] = {{"predictions", entry.predictions}, {"total_points", entry.total_points}};
  }
  return {{"total_points", stats.total_points},
          {"predictions", stats.predictions},
          {"mean_points", stats.mean_points},
          {"per_kind", std::move(per_kind)},
          {"interval_coverage",
           {{"intervals", stats.coverage.intervals},
            {"covered", stats.coverage.covered},
            {"rate", optional_number(stats.coverage.rate())}}}};
}

}  // namespace calib
