#include "calib/lab/interval_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "calib/error.hpp"

namespace calib::lab {
namespace {

void check_domain(const IntervalRule& rule, const BeliefDistribution& belief,
                  const IntervalForecast& f) {
  f.validate();
  if (rule.positive_domain && !(belief.support_min() > 0.0 && f.lower > 0.0)) {
    throw Error(ErrorCode::kDomain,
                "rule needs positive values but the belief support or forecast reaches 0");
  }
}

double integrate(const IntervalRule& rule, const std::vector<WeightedPoint>& nodes,
                 const IntervalForecast& f) {
  if (rule.expectation) return rule.expectation(nodes, f);
  double total = 0.0;
  for (const WeightedPoint& node : nodes) total += node.weight * rule.score(node.x, f);
  return total;
}

}  // namespace

double expected_interval_score(const IntervalRule& rule, const BeliefDistribution& belief,
                               const IntervalForecast& f) {
  check_domain(rule, belief, f);
  return integrate(rule, belief.quadrature(), f);
}

double quadrature_error_estimate(const IntervalRule& rule, const BeliefDistribution& belief,
                                 const IntervalForecast& f) {
  if (belief.kind() == BeliefDistribution::Kind::kDiscrete) return 0.0;
  check_domain(rule, belief, f);
  const double fine = integrate(rule, belief.quadrature(kQuadraturePoints), f);
  const double coarse = integrate(rule, belief.quadrature((kQuadraturePoints - 1) / 2), f);
  return std::abs(fine - coarse);
}

IntervalForecast honest_interval(const BeliefDistribution& belief, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "coverage level beta must lie in (0,1)");
  }
  const double tail = (1.0 - beta) / 2.0;
  return IntervalForecast{belief.quantile(tail), belief.quantile(1.0 - tail), beta};
}

std::vector<double> IntervalSearchGrid::values() const {
  if (!custom.empty()) return custom;
  if (points == 0) throw Error(ErrorCode::kInvalidArgument, "search grid is empty");
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::kInvalidArgument, "search grid needs finite lo <= hi");
  }
  if (spacing == Spacing::kLogarithmic && !(lo > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "logarithmic search grid needs lo > 0");
  }
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double denom = static_cast<double>(points - 1);
  const double step = spacing == Spacing::kLinear ? (hi - lo) / denom
                                                  : (std::log(hi) - std::log(lo)) / denom;
  for (std::size_t i = 0; i < points; ++i) {
    const double offset = static_cast<double>(i) * step;
    out[i] = spacing == Spacing::kLinear ? lo + offset : std::exp(std::log(lo) + offset);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

IntervalOptimum best_interval(const IntervalRule& rule, const BeliefDistribution& belief,
                              double beta, const IntervalSearchGrid& search) {
  std::vector<double> bounds = search.values();
  if (bounds.empty()) throw Error(ErrorCode::kInvalidArgument, "search grid is empty");
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  if (rule.positive_domain && !(bounds.front() > 0.0)) {
    throw Error(ErrorCode::kDomain, "rule needs positive bounds but the search grid reaches 0");
  }
  const std::vector<WeightedPoint> nodes = belief.quadrature();
  check_domain(rule, belief, IntervalForecast{bounds.front(), bounds.front(), beta});

  IntervalOptimum best{IntervalForecast{bounds.front(), bounds.front(), beta},
                       -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    for (std::size_t j = i; j < bounds.size(); ++j) {
      const IntervalForecast candidate{bounds[i], bounds[j], beta};
      const double value = integrate(rule, nodes, candidate);
      if (value > best.expected_score) best = {candidate, value};
    }
  }
  return best;
}

IncentiveGap measure_incentive_gap(const IntervalRule& rule, const BeliefDistribution& belief,
                                   double beta, const IntervalSearchGrid& search) {
  IncentiveGap result;
  result.best = best_interval(rule, belief, beta, search);
  result.honest = honest_interval(belief, beta);
  result.honest_score = expected_interval_score(rule, belief, result.honest);
  result.gap = result.best.expected_score - result.honest_score;
  result.quadrature_tolerance =
      std::max({quadrature_error_estimate(rule, belief, result.best.forecast),
                quadrature_error_estimate(rule, belief, result.honest), kQuadratureNoiseFloor});
  return result;
}

double incentive_gap(const IntervalRule& rule, const BeliefDistribution& belief, double beta,
                     const IntervalSearchGrid& search) {
  return measure_incentive_gap(rule, belief, beta, search).gap;
}

}  // namespace calib::lab
