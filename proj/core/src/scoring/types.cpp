#include "calib/scoring/types.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "calib/error.hpp"

namespace calib {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

ProbabilityVector::ProbabilityVector(std::vector<double> entries) : entries_(std::move(entries)) {
  require(!entries_.empty(), "probability vector must not be empty");
  double sum = 0.0;
  for (double p : entries_) {
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "probability entry outside [0,1]");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= kSumTolerance, "probabilities must sum to 1");
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
  require(n > 0, "uniform probability vector needs n >= 1");
  return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

OutcomeIndicator::OutcomeIndicator(std::vector<int> flags) : size_(flags.size()), index_(0) {
  std::size_t ones = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    require(flags[i] == 0 || flags[i] == 1, "outcome indicator entries must be 0 or 1");
    if (flags[i] == 1) {
      ++ones;
      index_ = i;
    }
  }
  require(ones == 1, "outcome indicator must have exactly one realized outcome");
}

OutcomeIndicator OutcomeIndicator::realized(std::size_t n, std::size_t index) {
  require(index < n, "realized outcome index out of range");
  std::vector<int> flags(n, 0);
  flags[index] = 1;
  return OutcomeIndicator(std::move(flags));
}

ChoiceScoringParams ChoiceScoringParams::for_options(std::size_t n, std::size_t k) {
  require(n >= 2, "need at least two options");
  require(k >= 1 && k < n, "selection count must satisfy 1 <= k < n");
  ChoiceScoringParams params;
  params.p_rand = static_cast<double>(k) / static_cast<double>(n);
  return params;
}

void ChoiceScoringParams::validate() const {
  require(std::isfinite(s_max) && s_max > 0.0, "s_max must be positive");
  require(std::isfinite(p_rand) && p_rand > 0.0, "p_rand must be positive");
  require(std::isfinite(p_max) && p_max > p_rand, "p_max must exceed p_rand");
  require(p_max < 1.0, "p_max must be below 1 for log-based scoring");
}

void IntervalForecast::validate() const {
  require(std::isfinite(lower) && std::isfinite(upper), "interval bounds must be finite");
  require(lower <= upper, "interval lower bound exceeds upper bound");
  require(beta > 0.0 && beta < 1.0, "coverage level beta must lie in (0,1)");
}

void IntervalForecast::validate_positive() const {
  validate();
  require(lower > 0.0, "magnitude intervals need a positive lower bound");
}

IntervalScoringParams IntervalScoringParams::distance_defaults() {
  return IntervalScoringParams{};
}

IntervalScoringParams IntervalScoringParams::magnitude_defaults() {
  IntervalScoringParams params;
  params.c = kMagnitudeScale;
  return params;
}

void IntervalScoringParams::validate() const {
  require(std::isfinite(c) && c > 0.0, "scale c must be positive");
  require(std::isfinite(d), "offset d must be finite");
  require(std::isfinite(s_max) && s_max > 0.0, "s_max must be positive");
  require(std::isfinite(s_min) && s_min < 0.0, "s_min must be negative");
  require(delta >= 0.0 && delta < 1.0, "expansion factor delta must lie in [0,1)");
}

namespace {

constexpr std::array<std::pair<RuleId, std::string_view>, 13> kRuleNames{{
    {RuleId::kQuadratic, "quadratic"},
    {RuleId::kBrier, "brier"},
    {RuleId::kLog, "log"},
    {RuleId::kProperFromConvex, "proper_from_convex"},
    {RuleId::kPractical, "practical"},
    {RuleId::kPracticalLog, "practical_log"},
    {RuleId::kGenericInterval, "generic_interval"},
    {RuleId::kLinearInterval, "linear_interval"},
    {RuleId::kLogInterval, "log_interval"},
    {RuleId::kDistanceRaw, "distance_raw"},
    {RuleId::kMagnitudeRaw, "magnitude_raw"},
    {RuleId::kDistance, "distance"},
    {RuleId::kMagnitude, "magnitude"},
}};

}  // namespace

std::string_view to_string(RuleId id) {
  for (const auto& [rule, name] : kRuleNames) {
    if (rule == id) return name;
  }
  return "unknown";
}

std::optional<RuleId> rule_from_string(std::string_view name) {
  for (const auto& [rule, rule_name] : kRuleNames) {
    if (rule_name == name) return rule;
  }
  return std::nullopt;
}

}  // namespace calib
