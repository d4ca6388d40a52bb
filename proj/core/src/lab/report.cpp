#include "calib/lab/report.hpp"

#include "calib/format.hpp"

namespace calib::lab {

nlohmann::json to_json(const PropernessReport& report) {
  return {
      {"max_argmax_deviation", report.max_argmax_deviation},
      {"worst_belief", report.worst_belief},
      {"incentive_gap", report.incentive_gap},
      {"report_step", report.report_step},
      {"beliefs_checked", report.beliefs_checked},
      {"passed", report.passed},
  };
}

nlohmann::json to_json(const IntervalForecast& forecast) {
  return {{"lower", forecast.lower}, {"upper", forecast.upper}, {"beta", forecast.beta}};
}

nlohmann::json to_json(const IncentiveGap& gap) {
  return {
      {"best", to_json(gap.best.forecast)},
      {"best_score", gap.best.expected_score},
      {"honest", to_json(gap.honest)},
      {"honest_score", gap.honest_score},
      {"gap", gap.gap},
      {"quadrature_tolerance", gap.quadrature_tolerance},
  };
}

std::vector<std::string> properness_row(const std::string& rule_name,
                                        const PropernessReport& report) {
  return {rule_name,
          format_number(report.max_argmax_deviation),
          format_number(report.worst_belief),
          format_number(report.incentive_gap),
          report.passed ? "pass" : "FAIL"};
}

std::vector<std::string> gap_row(const std::string& rule_name, const std::string& belief_name,
                                 const IncentiveGap& gap) {
  const std::string best = "[" + format_number(gap.best.forecast.lower) + ", " +
                           format_number(gap.best.forecast.upper) + "]";
  const std::string honest =
      "[" + format_number(gap.honest.lower) + ", " + format_number(gap.honest.upper) + "]";
  return {rule_name,     belief_name, honest, format_number(gap.honest_score),
          best,          format_number(gap.best.expected_score),
          format_number(gap.gap), format_number(gap.quadrature_tolerance)};
}

}  // namespace calib::lab
