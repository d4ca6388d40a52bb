#include "calib/scoring/interval.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "calib/error.hpp"

namespace calib {
namespace {

void require_positive(double x, const IntervalForecast& f) {
  if (!(x > 0.0) || !(f.lower > 0.0) || !(f.upper > 0.0)) {
    throw Error(ErrorCode::kDomain, "logarithmic interval rules need x, L and U > 0");
  }
}

void require_width(const IntervalForecast& f) {
  if (!(f.upper > f.lower)) {
    throw Error(ErrorCode::kDomain, "raw interval rules need U > L");
  }
}

double miss_penalty(double below, double above) {
  if (below > 0.0) return below;
  if (above > 0.0) return above;
  return 0.0;
}

// Splits an (r, s, t) evaluation into the parts reported in ScoreBreakdown.
ScoreBreakdown breakdown(double r, double t, double beta, double raw) {
  ScoreBreakdown parts;
  parts.raw_points = raw;
  const double miss = miss_penalty(r, t);
  parts.distance_penalty = miss > 0.0 ? 2.0 / (1.0 - beta) * miss : 0.0;
  parts.width_term = raw + parts.distance_penalty;
  return parts;
}

ScoreResult floored(RuleId id, double r, double s, double t, double beta,
                    const IntervalScoringParams& params) {
  const double raw = interval_kernel(r, s, t, beta, params.s_max);
  ScoreBreakdown parts = breakdown(r, t, beta, raw);
  parts.floored = !(raw > params.s_min);
  return ScoreResult{parts.floored ? params.s_min : raw, id, parts};
}

struct Rst {
  double r, s, t;
};

Rst distance_rst(double x, double lower, double upper, double c) {
  return {(lower - x) / c, (upper - lower) / c, (x - upper) / c};
}

Rst magnitude_rst(double x, double lower, double upper, double c) {
  return {std::log(lower / x) / c, std::log(upper / lower) / c, std::log(x / upper) / c};
}

}  // namespace

double generic_interval_score(double x, const IntervalForecast& f, const ScalarFunction& s1,
                              const ScalarFunction& s2, const ScalarFunction& u) {
  f.validate();
  const double width = s2(f.upper) - s1(f.lower);
  double miss = 0.0;
  if (x < f.lower) {
    miss = s1(f.lower) - s1(x);
  } else if (x > f.upper) {
    miss = s2(x) - s2(f.upper);
  }
  return u(x) - (1.0 - f.beta) / 2.0 * width - miss;
}

double linear_interval_score(double x, const IntervalForecast& f,
                             const IntervalScoringParams& params) {
  f.validate();
  params.validate();
  const double c = params.c;
  const double miss = miss_penalty((f.lower - x) / c, (x - f.upper) / c);
  return params.d - ((1.0 - f.beta) / 2.0 * (f.upper - f.lower) / c + miss);
}

double log_interval_score(double x, const IntervalForecast& f, const IntervalScoringParams& params) {
  f.validate();
  params.validate();
  require_positive(x, f);
  const double c = params.c;
  const double miss = miss_penalty(std::log(f.lower / x) / c, std::log(x / f.upper) / c);
  return params.d - ((1.0 - f.beta) / 2.0 * std::log(f.upper / f.lower) / c + miss);
}

double interval_kernel(double r, double s, double t, double beta, double s_max) {
  if (r > 0.0) return -2.0 / (1.0 - beta) * r - r / (1.0 + r) * s;
  if (t > 0.0) return -2.0 / (1.0 - beta) * t - t / (1.0 + t) * s;
  if (!(s > 0.0)) throw Error(ErrorCode::kDomain, "interval kernel needs positive width");
  return 4.0 * s_max * (r * t / (s * s)) * (1.0 / (1.0 + s));
}

double dist_score_raw(double x, const IntervalForecast& f, const IntervalScoringParams& params) {
  f.validate();
  params.validate();
  require_width(f);
  if (!std::isfinite(x)) throw Error(ErrorCode::kDomain, "realized value must be finite");
  const Rst v = distance_rst(x, f.lower, f.upper, params.c);
  return interval_kernel(v.r, v.s, v.t, f.beta, params.s_max);
}

double mag_score_raw(double x, const IntervalForecast& f, const IntervalScoringParams& params) {
  f.validate();
  params.validate();
  require_positive(x, f);
  require_width(f);
  const Rst v = magnitude_rst(x, f.lower, f.upper, params.c);
  return interval_kernel(v.r, v.s, v.t, f.beta, params.s_max);
}

ScoreResult dist_score_final(double x, const IntervalForecast& f,
                             const IntervalScoringParams& params) {
  f.validate();
  params.validate();
  if (!std::isfinite(x)) throw Error(ErrorCode::kDomain, "realized value must be finite");
  const double lower = f.lower - params.delta;
  const double upper = f.upper + params.delta;
  if (!(upper > lower)) throw Error(ErrorCode::kDomain, "zero-width interval needs delta > 0");
  const Rst v = distance_rst(x, lower, upper, params.c);
  return floored(RuleId::kDistance, v.r, v.s, v.t, f.beta, params);
}

ScoreResult mag_score_final(double x, const IntervalForecast& f,
                            const IntervalScoringParams& params) {
  f.validate();
  params.validate();
  require_positive(x, f);
  const double lower = f.lower * (1.0 - params.delta);
  const double upper = f.upper * (1.0 + params.delta);
  if (!(upper > lower)) throw Error(ErrorCode::kDomain, "zero-width interval needs delta > 0");
  const Rst v = magnitude_rst(x, lower, upper, params.c);
  return floored(RuleId::kMagnitude, v.r, v.s, v.t, f.beta, params);
}

double dist_expectation(std::span<const WeightedPoint> nodes, const IntervalForecast& f,
                        const IntervalScoringParams& params) {
  f.validate();
  params.validate();
  const double lower = f.lower - params.delta;
  const double upper = f.upper + params.delta;
  if (!(upper > lower)) throw Error(ErrorCode::kDomain, "zero-width interval needs delta > 0");
  const double s = (upper - lower) / params.c;
  double total = 0.0;
  for (const WeightedPoint& node : nodes) {
    if (!std::isfinite(node.x)) throw Error(ErrorCode::kDomain, "realized value must be finite");
    const double raw = interval_kernel((lower - node.x) / params.c, s, (node.x - upper) / params.c,
                                       f.beta, params.s_max);
    total += node.weight * (raw > params.s_min ? raw : params.s_min);
  }
  return total;
}

double mag_expectation(std::span<const WeightedPoint> nodes, const IntervalForecast& f,
                       const IntervalScoringParams& params) {
  f.validate();
  params.validate();
  require_positive(f.lower, f);
  const double lower = f.lower * (1.0 - params.delta);
  const double upper = f.upper * (1.0 + params.delta);
  if (!(upper > lower)) throw Error(ErrorCode::kDomain, "zero-width interval needs delta > 0");
  const double log_lower = std::log(lower);
  const double log_upper = std::log(upper);
  const double s = std::log(upper / lower) / params.c;
  double total = 0.0;
  for (const WeightedPoint& node : nodes) {
    require_positive(node.x, f);
    const double log_x = std::log(node.x);
    const double raw = interval_kernel((log_lower - log_x) / params.c, s,
                                       (log_x - log_upper) / params.c, f.beta, params.s_max);
    total += node.weight * (raw > params.s_min ? raw : params.s_min);
  }
  return total;
}

double linear_interval_expectation(std::span<const WeightedPoint> nodes, const IntervalForecast& f,
                                   const IntervalScoringParams& params) {
  f.validate();
  params.validate();
  const double c = params.c;
  const double width_term = (1.0 - f.beta) / 2.0 * (f.upper - f.lower) / c;
  double total = 0.0;
  for (const WeightedPoint& node : nodes) {
    const double miss = miss_penalty((f.lower - node.x) / c, (node.x - f.upper) / c);
    total += node.weight * (params.d - (width_term + miss));
  }
  return total;
}

double log_interval_expectation(std::span<const WeightedPoint> nodes, const IntervalForecast& f,
                                const IntervalScoringParams& params) {
  f.validate();
  params.validate();
  require_positive(f.lower, f);
  const double c = params.c;
  const double log_lower = std::log(f.lower);
  const double log_upper = std::log(f.upper);
  const double width_term = (1.0 - f.beta) / 2.0 * std::log(f.upper / f.lower) / c;
  double total = 0.0;
  for (const WeightedPoint& node : nodes) {
    require_positive(node.x, f);
    const double log_x = std::log(node.x);
    const double miss = miss_penalty((log_lower - log_x) / c, (log_x - log_upper) / c);
    total += node.weight * (params.d - (width_term + miss));
  }
  return total;
}

namespace interval_rules {

IntervalRule linear(IntervalScoringParams params) {
  params.validate();
  return {RuleId::kLinearInterval,
          [params](double x, const IntervalForecast& f) { return linear_interval_score(x, f, params); },
          false,
          [params](std::span<const WeightedPoint> nodes, const IntervalForecast& f) {
            return linear_interval_expectation(nodes, f, params);
          }};
}

IntervalRule logarithmic(IntervalScoringParams params) {
  params.validate();
  return {RuleId::kLogInterval,
          [params](double x, const IntervalForecast& f) { return log_interval_score(x, f, params); },
          true,
          [params](std::span<const WeightedPoint> nodes, const IntervalForecast& f) {
            return log_interval_expectation(nodes, f, params);
          }};
}

IntervalRule distance(IntervalScoringParams params) {
  params.validate();
  return {RuleId::kDistance,
          [params](double x, const IntervalForecast& f) {
            return dist_score_final(x, f, params).points;
          },
          false,
          [params](std::span<const WeightedPoint> nodes, const IntervalForecast& f) {
            return dist_expectation(nodes, f, params);
          }};
}

IntervalRule magnitude(IntervalScoringParams params) {
  params.validate();
  return {RuleId::kMagnitude,
          [params](double x, const IntervalForecast& f) {
            return mag_score_final(x, f, params).points;
          },
          true,
          [params](std::span<const WeightedPoint> nodes, const IntervalForecast& f) {
            return mag_expectation(nodes, f, params);
          }};
}

IntervalRule distance_raw(IntervalScoringParams params) {
  params.validate();
  return {RuleId::kDistanceRaw,
          [params](double x, const IntervalForecast& f) { return dist_score_raw(x, f, params); },
          false,
          {}};
}

IntervalRule magnitude_raw(IntervalScoringParams params) {
  params.validate();
  return {RuleId::kMagnitudeRaw,
          [params](double x, const IntervalForecast& f) { return mag_score_raw(x, f, params); },
          true,
          {}};
}

}  // namespace interval_rules

}  // namespace calib
