#pragma once

#include <cstddef>
#include <vector>

#include "calib/scoring/choice.hpp"

namespace calib::lab {

// Believed probabilities to test, and the candidate reports searched for each.
struct BeliefGrid {
  std::vector<double> believed;
  std::vector<double> reported;

  // lo + i*step up to hi inclusive, for both grids.
  static BeliefGrid regular(double lo, double hi, double believed_step, double reported_step);

  double reported_step() const;
  // Both sorted ascending within [0,1], reported step <= believed step.
  void validate() const;
};

struct PropernessReport {
  double max_argmax_deviation = 0.0;
  double worst_belief = 0.0;
  // Largest expected-score advantage of the best report over the report closest to the belief.
  double incentive_gap = 0.0;
  double report_step = 0.0;
  std::size_t beliefs_checked = 0;
  bool passed = false;
};

// believed * S(reported, correct) + (1 - believed) * S(reported, incorrect).
double expected_choice_score(const ChoiceRule& rule, double believed, double reported);

// Brute-force argmax over reported probabilities for every believed probability.
// Passes iff every argmax lies within one report-grid step of the belief.
// Ties go to the lowest report.
PropernessReport verify_choice_properness(const ChoiceRule& rule, const BeliefGrid& grid);

}  // namespace calib::lab
