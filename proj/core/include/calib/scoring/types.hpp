#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace calib {

// Default rule constants used by the training program.
inline constexpr double kDefaultSMax = 10.0;
inline constexpr double kDefaultPMax = 0.99;
// Largest loss of the practical-log rule on a binary question at p_max = 0.99,
// i.e. -10 ln(50) / ln(99/50). Shared by every rule as the point floor.
inline constexpr double kDefaultSMin = -57.26893683880667;
inline constexpr double kDefaultDelta = 0.4;
inline constexpr double kDefaultBeta = 0.9;
inline constexpr double kDistanceScale = 100.0;
inline constexpr double kMagnitudeScale = 2.0 * std::numbers::ln10;  // ln(100)

// Probabilities over n mutually exclusive outcomes.
class ProbabilityVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit ProbabilityVector(std::vector<double> entries);
  static ProbabilityVector uniform(std::size_t n);

  std::span<const double> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::vector<double> entries_;
};

// One-hot indicator of the realized outcome.
class OutcomeIndicator {
 public:
  explicit OutcomeIndicator(std::vector<int> flags);
  static OutcomeIndicator realized(std::size_t n, std::size_t index);

  std::size_t size() const { return size_; }
  std::size_t realized_index() const { return index_; }
  double operator[](std::size_t i) const { return i == index_ ? 1.0 : 0.0; }

 private:
  std::size_t size_;
  std::size_t index_;
};

struct ChoiceScoringParams {
  double s_max = kDefaultSMax;
  double p_max = kDefaultPMax;
  double p_rand = 0.5;

  // p_rand = k / n: chance that k uniformly random picks out of n include the answer.
  static ChoiceScoringParams for_options(std::size_t n, std::size_t k = 1);

  // Throws Error(kInvalidArgument) unless s_max > 0 and 0 < p_rand < p_max < 1.
  void validate() const;
};

struct IntervalForecast {
  double lower = 0.0;
  double upper = 0.0;
  double beta = kDefaultBeta;

  double width() const { return upper - lower; }

  // L <= U, 0 < beta < 1, all finite.
  void validate() const;
  // validate() plus L > 0.
  void validate_positive() const;
};

// A realized value with its probability weight, as produced by quadrature.
struct WeightedPoint {
  double x = 0.0;
  double weight = 0.0;
};

struct IntervalScoringParams {
  double c = kDistanceScale;
  double d = 0.0;
  double s_max = kDefaultSMax;
  double s_min = kDefaultSMin;
  double delta = kDefaultDelta;

  static IntervalScoringParams distance_defaults();
  static IntervalScoringParams magnitude_defaults();

  // c > 0, s_max > 0, s_min < 0, 0 <= delta < 1.
  void validate() const;
};

enum class RuleId {
  kQuadratic,
  kBrier,
  kLog,
  kProperFromConvex,
  kPractical,
  kPracticalLog,
  kGenericInterval,
  kLinearInterval,
  kLogInterval,
  kDistanceRaw,
  kMagnitudeRaw,
  kDistance,
  kMagnitude,
};

std::string_view to_string(RuleId id);
std::optional<RuleId> rule_from_string(std::string_view name);

// How an interval score was assembled. For points outside the interval the
// raw score is -distance_penalty + width_term; inside it is width_term alone.
struct ScoreBreakdown {
  double raw_points = 0.0;        // before the s_min floor
  double distance_penalty = 0.0;  // 2/(1-beta) times the normalized miss distance
  double width_term = 0.0;
  bool floored = false;
};

struct ScoreResult {
  double points = 0.0;
  RuleId rule = RuleId::kPracticalLog;
  std::optional<ScoreBreakdown> components;
};

}  // namespace calib
