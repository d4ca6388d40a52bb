#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace calib::trainer {

struct CheckResult {
  std::string name;
  std::string expectation;  // what had to hold, e.g. "proper" or "gap > 0"
  bool passed = false;
  std::string detail;
  nlohmann::json data = nlohmann::json::object();
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const;
};

struct VerifyOptions {
  std::size_t interval_grid_points = 201;
  std::uint64_t seed = 20240611;
};

// Choice-rule properness: the proper rules must pass the argmax grid and the
// non-proper control must fail it.
SuiteReport run_properness_suite(const VerifyOptions& options = {});
// Interval rules: linear/log gaps within quadrature noise, Distance and
// Order-of-Magnitude gaps strictly positive.
SuiteReport run_interval_gap_suite(const VerifyOptions& options = {});
// Closed-form and randomized invariants of every scoring operation.
SuiteReport run_invariant_suite(const VerifyOptions& options = {});

std::optional<SuiteReport> run_suite(std::string_view name, const VerifyOptions& options = {});
const std::vector<std::string>& suite_names();

nlohmann::json to_json(const SuiteReport& report);
std::string render_text(const SuiteReport& report);

}  // namespace calib::trainer
