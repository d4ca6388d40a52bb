#include "calib/scoring/choice.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "calib/error.hpp"

namespace calib {
namespace {

void require_same_size(const ProbabilityVector& p, const OutcomeIndicator& e) {
  if (p.size() != e.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "probability vector and outcome indicator differ in length");
  }
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kDomain, std::string(what) + " must lie in [0,1]");
  }
}

ProbabilityVector binary(double p) { return ProbabilityVector({p, 1.0 - p}); }

OutcomeIndicator binary_outcome(bool correct) {
  return OutcomeIndicator::realized(2, correct ? 0 : 1);
}

}  // namespace

// 2 p_k - sum p_i^2, accumulated with error-free transforms (fma products,
// TwoSum additions) so the result is within a rounding of the exact value.
double quadratic_score(const ProbabilityVector& p, const OutcomeIndicator& e) {
  require_same_size(p, e);
  double sum = 2.0 * p[e.realized_index()];
  double error = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double product = -p[i] * p[i];
    const double product_error = std::fma(-p[i], p[i], -product);
    const double next = sum + product;
    const double shifted = next - sum;
    error += (sum - (next - shifted)) + (product - shifted) + product_error;
    sum = next;
  }
  return sum + error;
}

double brier_score(const ProbabilityVector& p, const OutcomeIndicator& e) {
  require_same_size(p, e);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = e[i] - p[i];
    total += diff * diff;
  }
  return total;
}

double log_score(const ProbabilityVector& p, const OutcomeIndicator& e) {
  require_same_size(p, e);
  const double p_realized = p[e.realized_index()];
  if (p_realized <= 0.0) {
    throw Error(ErrorCode::kInfiniteScore, "log score is infinite: realized outcome had probability 0");
  }
  return -std::log(p_realized);
}

double proper_from_convex(const ScalarFunction& f, const ScalarFunction& f_prime, double p0,
                          bool outcome) {
  require_probability(p0, "p0");
  const double value = f(p0);
  const double slope = f_prime(p0);
  return outcome ? value + (1.0 - p0) * slope : value - p0 * slope;
}

double practical_score(const ChoiceRule& base_rule, const ChoiceScoringParams& params, double p,
                       bool correct) {
  if (!(p >= params.p_rand && p <= params.p_max)) {
    throw Error(ErrorCode::kDomain, "practical score needs p in [p_rand, p_max]");
  }
  const double denominator = base_rule(params.p_max, true) - base_rule(params.p_rand, true);
  if (!(denominator > 0.0)) {
    throw Error(ErrorCode::kDomain, "base rule does not increase from p_rand to p_max");
  }
  return params.s_max * (base_rule(p, correct) - base_rule(params.p_rand, correct)) / denominator;
}

double clamp_probability(double p, const ChoiceScoringParams& params) {
  require_probability(p, "confidence");
  return std::min(std::max(p, params.p_rand), params.p_max);
}

ScoreResult practical_log_choice_score(double p, bool correct, const ChoiceScoringParams& params) {
  params.validate();
  const double q = clamp_probability(p, params);
  const double coefficient = params.s_max / (std::log(params.p_max) - std::log(params.p_rand));
  const double gain = correct ? std::log(q) - std::log(params.p_rand)
                              : std::log1p(-q) - std::log1p(-params.p_rand);
  return ScoreResult{coefficient * gain, RuleId::kPracticalLog, std::nullopt};
}

namespace choice_rules {

ChoiceRule quadratic() {
  return [](double p, bool correct) { return quadratic_score(binary(p), binary_outcome(correct)); };
}

ChoiceRule brier() {
  return [](double p, bool correct) { return -brier_score(binary(p), binary_outcome(correct)); };
}

ChoiceRule logarithmic() {
  return [](double p, bool correct) { return -log_score(binary(p), binary_outcome(correct)); };
}

ChoiceRule from_convex(ScalarFunction f, ScalarFunction f_prime) {
  return [f = std::move(f), f_prime = std::move(f_prime)](double p, bool correct) {
    return proper_from_convex(f, f_prime, p, correct);
  };
}

ChoiceRule practical(ChoiceRule base, ChoiceScoringParams params) {
  params.validate();
  return [base = std::move(base), params](double p, bool correct) {
    return practical_score(base, params, p, correct);
  };
}

ChoiceRule practical_log(ChoiceScoringParams params) {
  params.validate();
  return [params](double p, bool correct) {
    return practical_log_choice_score(p, correct, params).points;
  };
}

}  // namespace choice_rules

}  // namespace calib
