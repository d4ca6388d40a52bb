#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "calib/lab/interval_search.hpp"
#include "calib/lab/properness.hpp"

namespace calib::lab {

nlohmann::json to_json(const PropernessReport& report);
nlohmann::json to_json(const IntervalForecast& forecast);
nlohmann::json to_json(const IncentiveGap& gap);

// Table rows for the CLI's aligned-column output.
std::vector<std::string> properness_row(const std::string& rule_name, const PropernessReport& report);
std::vector<std::string> gap_row(const std::string& rule_name, const std::string& belief_name,
                                 const IncentiveGap& gap);

}  // namespace calib::lab
