#pragma once

#include <cstddef>
#include <vector>

#include "calib/lab/belief.hpp"
#include "calib/scoring/interval.hpp"

namespace calib::lab {

// E_belief[rule(x, f)]: exact sum for discrete beliefs, kQuadraturePoints-point
// midpoint rule otherwise. Throws Error(kDomain) when the rule needs positive
// values and the belief support or the forecast reaches 0.
double expected_interval_score(const IntervalRule& rule, const BeliefDistribution& belief,
                               const IntervalForecast& f);

// |Q(N) - Q((N-1)/2)| for the midpoint rule; 0 for discrete beliefs.
double quadrature_error_estimate(const IntervalRule& rule, const BeliefDistribution& belief,
                                 const IntervalForecast& f);

// Equal-tail interval [F^-1((1-beta)/2), F^-1(1-(1-beta)/2)].
IntervalForecast honest_interval(const BeliefDistribution& belief, double beta);

// Candidate bounds for the brute-force search over (L, U), L <= U.
struct IntervalSearchGrid {
  enum class Spacing { kLinear, kLogarithmic };

  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 201;
  Spacing spacing = Spacing::kLinear;
  // When non-empty, used verbatim (any order) instead of the generated points.
  std::vector<double> custom;

  std::vector<double> values() const;
};

struct IntervalOptimum {
  IntervalForecast forecast;
  double expected_score = 0.0;
};

// Exhaustive argmax of expected_interval_score over all grid pairs L <= U.
// Ties go to the smallest L, then the smallest U.
IntervalOptimum best_interval(const IntervalRule& rule, const BeliefDistribution& belief,
                              double beta, const IntervalSearchGrid& search);

struct IncentiveGap {
  IntervalOptimum best;
  IntervalForecast honest;
  double honest_score = 0.0;
  double gap = 0.0;
  // max(quadrature error estimate at best and honest, kQuadratureNoiseFloor).
  double quadrature_tolerance = 0.0;
};

// Accumulated rounding of a 10,001-term weighted sum of O(10) points.
inline constexpr double kQuadratureNoiseFloor = 1e-12;

IncentiveGap measure_incentive_gap(const IntervalRule& rule, const BeliefDistribution& belief,
                                   double beta, const IntervalSearchGrid& search);

// best_interval expectation minus the honest interval's expectation.
double incentive_gap(const IntervalRule& rule, const BeliefDistribution& belief, double beta,
                     const IntervalSearchGrid& search);

}  // namespace calib::lab
