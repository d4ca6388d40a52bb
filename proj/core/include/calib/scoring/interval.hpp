#pragma once

#include <functional>
#include <span>
#include <string>

#include "calib/scoring/types.hpp"

namespace calib {

using ScalarFunction = std::function<double(double)>;

// Quantile-based proper rule for a beta-coverage interval, with nondecreasing
// s1 (lower bound) and s2 (upper bound) and an arbitrary outcome bonus u:
//   u(x) - (1-beta)/2 (s2(U) - s1(L)) - [s1(L) - s1(x) | 0 | s2(x) - s2(U)].
double generic_interval_score(double x, const IntervalForecast& f, const ScalarFunction& s1,
                              const ScalarFunction& s2, const ScalarFunction& u);

// generic_interval_score with s1 = s2 = a/c and u = d.
double linear_interval_score(double x, const IntervalForecast& f,
                             const IntervalScoringParams& params);

// generic_interval_score with s1 = s2 = ln(a)/c and u = d. Needs x, L, U > 0.
double log_interval_score(double x, const IntervalForecast& f, const IntervalScoringParams& params);

// Shared piecewise form of the Distance and Order-of-Magnitude rules in terms of
// r (how far x lies below L), s (interval width) and t (how far x lies above U),
// all in units of c. r > 0 selects the below branch, t > 0 the above branch,
// otherwise x is inside and the score is 4 s_max (r t / s^2) / (1 + s).
double interval_kernel(double r, double s, double t, double beta, double s_max);

// Raw Distance rule: r = (L-x)/c, s = (U-L)/c, t = (x-U)/c. Requires U > L.
double dist_score_raw(double x, const IntervalForecast& f, const IntervalScoringParams& params);

// Raw Order-of-Magnitude rule: r = ln(L/x)/c, s = ln(U/L)/c, t = ln(x/U)/c.
// Requires x, L, U > 0 and U > L.
double mag_score_raw(double x, const IntervalForecast& f, const IntervalScoringParams& params);

// Final Distance rule: raw rule on [L - delta, U + delta], floored at s_min.
ScoreResult dist_score_final(double x, const IntervalForecast& f,
                             const IntervalScoringParams& params);

// Final Order-of-Magnitude rule: raw rule on [L (1 - delta), U (1 + delta)], floored at s_min.
ScoreResult mag_score_final(double x, const IntervalForecast& f,
                            const IntervalScoringParams& params);

// sum_i w_i S(x_i; f) with the forecast validated once. Agrees with summing
// the pointwise rule up to rounding.
double dist_expectation(std::span<const WeightedPoint> nodes, const IntervalForecast& f,
                        const IntervalScoringParams& params);
double mag_expectation(std::span<const WeightedPoint> nodes, const IntervalForecast& f,
                       const IntervalScoringParams& params);
double linear_interval_expectation(std::span<const WeightedPoint> nodes, const IntervalForecast& f,
                                   const IntervalScoringParams& params);
double log_interval_expectation(std::span<const WeightedPoint> nodes, const IntervalForecast& f,
                                const IntervalScoringParams& params);

// Interval rule handle: scores a realized value x against a forecast.
struct IntervalRule {
  RuleId id = RuleId::kDistance;
  std::function<double(double x, const IntervalForecast& f)> score;
  bool positive_domain = false;  // x, L and U must all be > 0
  // Optional batched form of sum_i w_i score(x_i, f); used by grid searches.
  std::function<double(std::span<const WeightedPoint>, const IntervalForecast&)> expectation;
};

namespace interval_rules {

IntervalRule linear(IntervalScoringParams params);
IntervalRule logarithmic(IntervalScoringParams params);
IntervalRule distance(IntervalScoringParams params);
IntervalRule magnitude(IntervalScoringParams params);
IntervalRule distance_raw(IntervalScoringParams params);
IntervalRule magnitude_raw(IntervalScoringParams params);

}  // namespace interval_rules

}  // namespace calib
