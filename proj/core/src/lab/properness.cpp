#include "calib/lab/properness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "calib/error.hpp"

namespace calib::lab {
namespace {

// Grid points are generated as lo + i*step; allow for that rounding when
// comparing step sizes and deviations.
constexpr double kStepSlack = 1e-9;

std::vector<double> regular_points(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs lo <= hi and a positive step");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + kStepSlack)) + 1;
  std::vector<double> points(count);
  for (std::size_t i = 0; i < count; ++i) {
    points[i] = std::min(lo + static_cast<double>(i) * step, hi);
  }
  return points;
}

double min_step(const std::vector<double>& values) {
  double step = 1.0;
  for (std::size_t i = 1; i < values.size(); ++i) step = std::min(step, values[i] - values[i - 1]);
  return step;
}

double max_step(const std::vector<double>& values) {
  double step = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) step = std::max(step, values[i] - values[i - 1]);
  return step;
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kDomain, std::string(what) + " probability outside [0,1]");
  }
}

}  // namespace

BeliefGrid BeliefGrid::regular(double lo, double hi, double believed_step, double reported_step) {
  BeliefGrid grid{regular_points(lo, hi, believed_step), regular_points(lo, hi, reported_step)};
  grid.validate();
  return grid;
}

double BeliefGrid::reported_step() const { return max_step(reported); }

void BeliefGrid::validate() const {
  auto check = [](const std::vector<double>& values, const char* name) {
    if (values.empty()) {
      throw Error(ErrorCode::kInvalidArgument, std::string(name) + " grid is empty");
    }
    if (!std::is_sorted(values.begin(), values.end()) || values.front() < 0.0 ||
        values.back() > 1.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(name) + " grid must be sorted within [0,1]");
    }
  };
  check(believed, "believed");
  check(reported, "reported");
  if (believed.size() > 1 && reported.size() > 1 &&
      reported_step() > min_step(believed) + kStepSlack) {
    throw Error(ErrorCode::kInvalidArgument, "report grid must be at least as fine as belief grid");
  }
}

double expected_choice_score(const ChoiceRule& rule, double believed, double reported) {
  require_probability(believed, "believed");
  require_probability(reported, "reported");
  return believed * rule(reported, true) + (1.0 - believed) * rule(reported, false);
}

PropernessReport verify_choice_properness(const ChoiceRule& rule, const BeliefGrid& grid) {
  grid.validate();
  PropernessReport report;
  report.report_step = grid.reported_step();
  report.beliefs_checked = grid.believed.size();

  // Cache S(q, 1) and S(q, 0) once per report point.
  std::vector<double> if_correct(grid.reported.size());
  std::vector<double> if_incorrect(grid.reported.size());
  for (std::size_t j = 0; j < grid.reported.size(); ++j) {
    if_correct[j] = rule(grid.reported[j], true);
    if_incorrect[j] = rule(grid.reported[j], false);
  }

  for (double p : grid.believed) {
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    std::size_t nearest = 0;
    for (std::size_t j = 0; j < grid.reported.size(); ++j) {
      const double value = p * if_correct[j] + (1.0 - p) * if_incorrect[j];
      if (value > best_value) {
        best_value = value;
        best = j;
      }
      if (std::abs(grid.reported[j] - p) < std::abs(grid.reported[nearest] - p)) nearest = j;
    }
    const double honest_value = p * if_correct[nearest] + (1.0 - p) * if_incorrect[nearest];
    const double deviation = std::abs(grid.reported[best] - p);
    if (deviation > report.max_argmax_deviation) {
      report.max_argmax_deviation = deviation;
      report.worst_belief = p;
    }
    report.incentive_gap = std::max(report.incentive_gap, best_value - honest_value);
  }
  report.passed = report.max_argmax_deviation <= report.report_step + kStepSlack;
  return report;
}

}  // namespace calib::lab
