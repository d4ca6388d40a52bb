#pragma once

#include <functional>

#include "calib/scoring/types.hpp"

namespace calib {

// Classical rules over a full probability vector. Quadratic is higher-is-better;
// Brier and log are losses (lower is better), kept in their textbook orientation.
double quadratic_score(const ProbabilityVector& p, const OutcomeIndicator& e);
double brier_score(const ProbabilityVector& p, const OutcomeIndicator& e);
// -ln(p_c). Throws Error(kInfiniteScore) when p_c == 0.
double log_score(const ProbabilityVector& p, const OutcomeIndicator& e);

using ScalarFunction = std::function<double(double)>;

// Binary proper rule generated by a convex, differentiable f:
//   S(p, 1) = f(p) + (1 - p) f'(p),  S(p, 0) = f(p) - p f'(p).
// Convexity is the caller's responsibility.
double proper_from_convex(const ScalarFunction& f, const ScalarFunction& f_prime, double p0,
                          bool outcome);

// A higher-is-better binary rule: points for confidence p in a selection that
// turned out correct (true) or incorrect (false).
using ChoiceRule = std::function<double(double p, bool correct)>;

// Rescales a proper base rule so that p_rand scores 0 for either outcome and a
// correct answer at p_max scores s_max. p must already lie in [p_rand, p_max].
double practical_score(const ChoiceRule& base_rule, const ChoiceScoringParams& params, double p,
                       bool correct);

// min(max(p, p_rand), p_max); p itself must be a probability.
double clamp_probability(double p, const ChoiceScoringParams& params);

// Practical transform of the log rule. Clamps p into [p_rand, p_max] first.
ScoreResult practical_log_choice_score(double p, bool correct, const ChoiceScoringParams& params);

// ChoiceRule handles for the properness lab and the practical transform.
namespace choice_rules {

ChoiceRule quadratic();
ChoiceRule brier();        // negated so that higher is better
ChoiceRule logarithmic();  // ln p / ln(1 - p)
ChoiceRule from_convex(ScalarFunction f, ScalarFunction f_prime);
ChoiceRule practical(ChoiceRule base, ChoiceScoringParams params);
ChoiceRule practical_log(ChoiceScoringParams params);

}  // namespace choice_rules

}  // namespace calib
