#include "calib/trainer/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "calib/error.hpp"
#include "calib/format.hpp"
#include "calib/lab/belief.hpp"
#include "calib/lab/interval_search.hpp"
#include "calib/lab/properness.hpp"
#include "calib/lab/report.hpp"
#include "calib/scoring/choice.hpp"
#include "calib/scoring/interval.hpp"

namespace calib::trainer {

using nlohmann::json;

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

// Platform-independent uniform draws; std distributions differ across stdlibs.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

 private:
  std::mt19937_64 engine_;
};

CheckResult check(std::string name, std::string expectation, bool passed, std::string detail,
                  json data = json::object()) {
  return {std::move(name), std::move(expectation), passed, std::move(detail), std::move(data)};
}

std::string num(double v) { return format_number(v); }

CheckResult properness_check(const std::string& name, const ChoiceRule& rule,
                             const lab::BeliefGrid& grid, bool claimed_proper) {
  const lab::PropernessReport report = lab::verify_choice_properness(rule, grid);
  std::ostringstream detail;
  detail << "max argmax deviation " << num(report.max_argmax_deviation) << " at belief "
         << num(report.worst_belief) << ", step " << num(report.report_step);
  return check(name, claimed_proper ? "proper" : "not proper",
               report.passed == claimed_proper, detail.str(), lab::to_json(report));
}

CheckResult gap_check(const std::string& name, const IntervalRule& rule,
                      const lab::BeliefDistribution& belief, const lab::IntervalSearchGrid& grid,
                      bool claimed_proper) {
  const lab::IncentiveGap gap = lab::measure_incentive_gap(rule, belief, kDefaultBeta, grid);
  const double bound = 2.0 * gap.quadrature_tolerance;
  const bool passed = claimed_proper ? std::abs(gap.gap) <= bound : gap.gap > bound;
  std::ostringstream detail;
  detail << "gap " << num(gap.gap) << " (tolerance " << num(bound) << "), best ["
         << num(gap.best.forecast.lower) << ", " << num(gap.best.forecast.upper) << "] vs honest ["
         << num(gap.honest.lower) << ", " << num(gap.honest.upper) << "]";
  return check(name, claimed_proper ? "|gap| <= 2 tol" : "gap > 2 tol", passed, detail.str(),
               lab::to_json(gap));
}

}  // namespace

SuiteReport run_properness_suite(const VerifyOptions&) {
  SuiteReport report{"properness", {}};
  const auto binary = ChoiceScoringParams::for_options(2);
  const auto four = ChoiceScoringParams::for_options(4);

  report.checks.push_back(properness_check(
      "practical_log n=2", choice_rules::practical_log(binary),
      lab::BeliefGrid::regular(binary.p_rand, binary.p_max, 0.01, 0.001), true));
  report.checks.push_back(properness_check(
      "practical_log n=4", choice_rules::practical_log(four),
      lab::BeliefGrid::regular(four.p_rand, four.p_max, 0.01, 0.001), true));
  report.checks.push_back(properness_check("quadratic", choice_rules::quadratic(),
                                           lab::BeliefGrid::regular(0.01, 0.99, 0.01, 0.001), true));
  report.checks.push_back(properness_check("brier", choice_rules::brier(),
                                           lab::BeliefGrid::regular(0.01, 0.99, 0.01, 0.001), true));
  report.checks.push_back(properness_check(
      "proper_from_convex f=x^2",
      choice_rules::from_convex([](double x) { return x * x; }, [](double x) { return 2.0 * x; }),
      lab::BeliefGrid::regular(0.01, 0.99, 0.01, 0.001), true));
  // Paying the stated probability of the realized outcome rewards extreme reports.
  report.checks.push_back(properness_check(
      "linear payoff (control)", [](double p, bool correct) { return correct ? p : 1.0 - p; },
      lab::BeliefGrid::regular(0.01, 0.99, 0.01, 0.001), false));
  return report;
}

SuiteReport run_interval_gap_suite(const VerifyOptions& options) {
  SuiteReport report{"interval-gap", {}};
  const auto uniform = lab::BeliefDistribution::uniform(0.0, 100.0);
  const auto log_uniform = lab::BeliefDistribution::log_uniform(1.0, 1e4);
  lab::IntervalSearchGrid linear_grid{-25.0, 125.0, options.interval_grid_points,
                                      lab::IntervalSearchGrid::Spacing::kLinear, {}};
  lab::IntervalSearchGrid log_grid{0.1, 1e5, options.interval_grid_points,
                                   lab::IntervalSearchGrid::Spacing::kLogarithmic, {}};

  IntervalScoringParams unit_scale;
  unit_scale.c = 1.0;
  report.checks.push_back(gap_check("linear_interval on uniform[0,100]",
                                    interval_rules::linear(unit_scale), uniform, linear_grid, true));
  report.checks.push_back(gap_check("log_interval on log-uniform[1,1e4]",
                                    interval_rules::logarithmic(unit_scale), log_uniform, log_grid,
                                    true));
  report.checks.push_back(gap_check("distance on uniform[0,100]",
                                    interval_rules::distance(IntervalScoringParams::distance_defaults()),
                                    uniform, linear_grid, false));
  report.checks.push_back(gap_check(
      "magnitude on log-uniform[1,1e4]",
      interval_rules::magnitude(IntervalScoringParams::magnitude_defaults()), log_uniform, log_grid,
      false));
  return report;
}

SuiteReport run_invariant_suite(const VerifyOptions& options) {
  SuiteReport report{"invariants", {}};
  Uniform draw(options.seed);
  const auto binary = ChoiceScoringParams::for_options(2);

  {
    const double top = practical_log_choice_score(0.99, true, binary).points;
    const double bottom = practical_log_choice_score(0.99, false, binary).points;
    const bool ok = std::abs(top - 10.0) <= 1e-12 && std::abs(bottom - kDefaultSMin) <= 1e-9;
    report.checks.push_back(check("practical_log constants", "10 and s_min at p_max", ok,
                                  "correct " + num(top) + ", incorrect " + num(bottom)));
  }

  {
    double worst = 0.0;
    for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {4, 1}, {5, 2}}) {
      const auto params = ChoiceScoringParams::for_options(n, k);
      for (bool correct : {true, false}) {
        worst = std::max(worst, std::abs(practical_log_choice_score(params.p_rand, correct, params).points));
      }
    }
    report.checks.push_back(check("zero at p_rand", "|score| <= 1e-12", worst <= 1e-12,
                                  "max |score| " + num(worst)));
  }

  {
    bool ok = true;
    std::string failure;
    for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {4, 1}, {5, 2}}) {
      const auto params = ChoiceScoringParams::for_options(n, k);
      double prev_hit = 0.0;
      double prev_miss = 0.0;
      for (int i = 1; i <= 500 && ok; ++i) {
        const double p = params.p_rand + (params.p_max - params.p_rand) * i / 500.0;
        const double hit = practical_log_choice_score(p, true, params).points;
        const double miss = practical_log_choice_score(p, false, params).points;
        if (!(hit > 0.0) || !(miss < 0.0) || (i > 1 && (!(hit > prev_hit) || !(miss < prev_miss)))) {
          ok = false;
          failure = "fails at p=" + num(p) + " with p_rand=" + num(params.p_rand);
        }
        prev_hit = hit;
        prev_miss = miss;
      }
    }
    report.checks.push_back(check("sign and monotonicity", "correct > 0 rising, incorrect < 0 falling",
                                  ok, ok ? "500 points per p_rand" : failure));
  }

  {
    const double root = 1.0 - std::numbers::sqrt2 / 2.0;
    const double at_root = quadratic_score(ProbabilityVector({root, 1.0 - root}),
                                           OutcomeIndicator::realized(2, 0));
    bool uniform_ok = true;
    for (std::size_t n = 2; n <= 10; ++n) {
      for (std::size_t i = 0; i < n; ++i) {
        const double s = quadratic_score(ProbabilityVector::uniform(n), OutcomeIndicator::realized(n, i));
        uniform_ok = uniform_ok && s == 1.0 / static_cast<double>(n);
      }
    }
    report.checks.push_back(check("quadratic zero crossing and 1/n", "|S| <= 1e-12 at 1-sqrt2/2",
                                  std::abs(at_root) <= 1e-12 && uniform_ok,
                                  "S(root) = " + num(at_root)));
  }

  {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double a = draw(0.01, 1.0);
      const double b = draw(0.01, 1.0);
      const double separate = log_score(ProbabilityVector({a, 1.0 - a}), OutcomeIndicator::realized(2, 0)) +
                              log_score(ProbabilityVector({b, 1.0 - b}), OutcomeIndicator::realized(2, 0));
      const double joint = log_score(ProbabilityVector({a * b, 1.0 - a * b}),
                                     OutcomeIndicator::realized(2, 0));
      worst = std::max(worst, std::abs(separate - joint));
    }
    report.checks.push_back(check("log additivity", "1000 pairs within 1e-12", worst <= 1e-12,
                                  "max deviation " + num(worst)));
  }

  {
    const auto dist = IntervalScoringParams::distance_defaults();
    const auto mag = IntervalScoringParams::magnitude_defaults();
    double edge = 0.0;
    double peak_error = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double lower = draw(-500.0, 500.0);
      const IntervalForecast f{lower, lower + draw(1.0, 300.0), kDefaultBeta};
      edge = std::max({edge, std::abs(dist_score_raw(f.lower, f, dist)),
                       std::abs(dist_score_raw(f.upper, f, dist))});
      const double s = f.width() / dist.c;
      peak_error = std::max(peak_error, std::abs(dist_score_raw(0.5 * (f.lower + f.upper), f, dist) -
                                                 dist.s_max / (1.0 + s)));
      const double pos = std::pow(10.0, draw(-2.0, 4.0));
      const IntervalForecast g{pos, pos * std::pow(10.0, draw(0.1, 3.0)), kDefaultBeta};
      edge = std::max({edge, std::abs(mag_score_raw(g.lower, g, mag)),
                       std::abs(mag_score_raw(g.upper, g, mag))});
      const double sm = std::log(g.upper / g.lower) / mag.c;
      peak_error = std::max(peak_error, std::abs(mag_score_raw(std::sqrt(g.lower * g.upper), g, mag) -
                                                 mag.s_max / (1.0 + sm)));
    }
    report.checks.push_back(check("interval boundary and peak", "0 at L,U; s_max/(1+s) at centre",
                                  edge <= 1e-12 && peak_error <= 1e-9,
                                  "edge " + num(edge) + ", peak error " + num(peak_error)));
  }

  {
    const auto dist = IntervalScoringParams::distance_defaults();
    const auto mag = IntervalScoringParams::magnitude_defaults();
    const double eps = 1e-6;
    double worst = 0.0;
    for (int i = 0; i < 10'000; ++i) {
      const double lower = draw(-1000.0, 1000.0);
      const IntervalForecast f{lower, lower + draw(0.0, 500.0), kDefaultBeta};
      const double seams[] = {f.lower - dist.delta, f.upper + dist.delta, draw(lower - 200.0, f.upper + 200.0)};
      const double x = seams[i % 3];
      const double base = dist_score_final(x, f, dist).points;
      for (double dx : {-eps, eps}) {
        worst = std::max(worst, std::abs(dist_score_final(x + dx, f, dist).points - base));
        IntervalForecast moved = f;
        moved.lower += dx;
        if (moved.lower <= moved.upper) worst = std::max(worst, std::abs(dist_score_final(x, moved, dist).points - base));
        moved = f;
        moved.upper += dx;
        if (moved.lower <= moved.upper) worst = std::max(worst, std::abs(dist_score_final(x, moved, dist).points - base));
      }

      const double pos = std::pow(10.0, draw(0.0, 4.0));
      const IntervalForecast g{pos, pos * std::pow(10.0, draw(0.0, 3.0)), kDefaultBeta};
      const double mag_seams[] = {g.lower * (1.0 - mag.delta), g.upper * (1.0 + mag.delta),
                                  std::pow(10.0, draw(0.0, 7.0))};
      const double y = std::max(1.0, mag_seams[i % 3]);
      const double mag_base = mag_score_final(y, g, mag).points;
      for (double dx : {-eps, eps}) {
        worst = std::max(worst, std::abs(mag_score_final(y + dx, g, mag).points - mag_base));
        IntervalForecast moved = g;
        moved.lower += dx;
        if (moved.lower <= moved.upper) worst = std::max(worst, std::abs(mag_score_final(y, moved, mag).points - mag_base));
        moved = g;
        moved.upper += dx;
        if (moved.lower <= moved.upper) worst = std::max(worst, std::abs(mag_score_final(y, moved, mag).points - mag_base));
      }
    }
    report.checks.push_back(check("continuity at seams", "max jump < 1e-4 under 1e-6 moves",
                                  worst < 1e-4, "max jump " + num(worst)));
  }

  {
    const auto dist = IntervalScoringParams::distance_defaults();
    const auto mag = IntervalScoringParams::magnitude_defaults();
    double lowest = 0.0;
    double highest = 0.0;
    for (int i = 0; i < 100'000; ++i) {
      const double lower = draw(-1e6, 1e6);
      const IntervalForecast f{lower, lower + std::pow(10.0, draw(-3.0, 6.0)), kDefaultBeta};
      const double x = lower + draw(-1.0, 1.0) * std::pow(10.0, draw(-3.0, 9.0));
      const double a = dist_score_final(x, f, dist).points;
      const double pos = std::pow(10.0, draw(-6.0, 6.0));
      const IntervalForecast g{pos, pos * std::pow(10.0, draw(0.0, 6.0)), kDefaultBeta};
      const double b = mag_score_final(std::pow(10.0, draw(-9.0, 9.0)), g, mag).points;
      lowest = std::min({lowest, a, b});
      highest = std::max({highest, a, b});
    }
    // Narrowest width guess against a value a billion away.
    const double extreme = dist_score_final(1e9, IntervalForecast{0.0, 0.0, kDefaultBeta}, dist).points;
    const double extreme_mag =
        mag_score_final(10.0, IntervalForecast{1e9, 1.000000001e9, kDefaultBeta}, mag).points;
    const bool ok = lowest >= kDefaultSMin && highest <= kDefaultSMax && extreme == kDefaultSMin &&
                    extreme_mag == kDefaultSMin;
    report.checks.push_back(check("bounds and floor", "[s_min, s_max]; extreme miss == s_min", ok,
                                  "range [" + num(lowest) + ", " + num(highest) + "], extreme " +
                                      num(extreme) + " / " + num(extreme_mag)));
  }

  {
    const auto mag = IntervalScoringParams::magnitude_defaults();
    IntervalScoringParams unit;
    unit.c = 1.0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double pos = std::pow(10.0, draw(-3.0, 3.0));
      const IntervalForecast f{pos, pos * std::pow(10.0, draw(0.0, 3.0)), kDefaultBeta};
      const double x = std::pow(10.0, draw(-4.0, 7.0));
      const double k = std::pow(10.0, draw(-6.0, 6.0));
      const IntervalForecast scaled{f.lower * k, f.upper * k, f.beta};
      const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
      worst = std::max(worst, rel(mag_score_final(x, f, mag).points, mag_score_final(x * k, scaled, mag).points));
      worst = std::max(worst, rel(log_interval_score(x, f, unit), log_interval_score(x * k, scaled, unit)));
    }
    report.checks.push_back(check("unit invariance", "relative change <= 1e-9", worst <= 1e-9,
                                  "max relative change " + num(worst)));
  }
  return report;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"properness", "interval-gap", "invariants"};
  return names;
}

std::optional<SuiteReport> run_suite(std::string_view name, const VerifyOptions& options) {
  if (name == "properness") return run_properness_suite(options);
  if (name == "interval-gap") return run_interval_gap_suite(options);
  if (name == "invariants") return run_invariant_suite(options);
  return std::nullopt;
}

json to_json(const SuiteReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"expectation", c.expectation},
                      {"passed", c.passed},
                      {"detail", c.detail},
                      {"data", c.data}});
  }
  return {{"suite", report.suite}, {"passed", report.passed()}, {"checks", std::move(checks)}};
}

std::string render_text(const SuiteReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : report.checks) {
    rows.push_back({c.passed ? "PASS" : "FAIL", c.name, c.expectation, c.detail});
  }
  std::string text = "suite " + report.suite + "\n";
  text += render_table({"result", "check", "expects", "detail"}, rows);
  text += report.passed() ? "suite passed\n" : "suite FAILED\n";
  return text;
}

}  // namespace calib::trainer
