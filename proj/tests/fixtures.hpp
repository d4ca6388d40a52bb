#pragma once

// Reference values from tests/oracles/compute_fixtures.py (mpmath, 50 digits),
// rounded to double. Regenerate with `python3 tests/oracles/compute_fixtures.py`.

namespace calib::fixtures {

// Practical-log choice rule, s_max = 10, p_max = 0.99.
inline constexpr double kPracticalLogBinary07Correct = 4.9256886373967887492;
inline constexpr double kPracticalLogBinary099Incorrect = -57.26893683880666753;
inline constexpr double kPracticalLogFour08Incorrect = -9.6040804952920840956;
inline constexpr double kPracticalLogFour08Correct = 8.4516320394599971628;

// Classical rules.
inline constexpr double kQuadratic0703Outcome0 = 0.82;
inline constexpr double kBrier0703Outcome0 = 0.18;
inline constexpr double kLogHalf = 0.69314718055994530942;
inline constexpr double kQuadraticZeroCrossing = 0.2928932188134524756;

// Interval rules, beta = 0.9.
inline constexpr double kDistRaw_0_20_at_10 = 8.3333333333333333333;
inline constexpr double kDistRaw_50_70_at_30 = -4.0333333333333333333;
inline constexpr double kDistFinal_10_100_at_10 = 0.091947165531302252994;
inline constexpr double kDistFinal_50_50_at_50 = 9.9206349206349206349;
inline constexpr double kMagRaw_10_1000_at_100 = 5.0;
inline constexpr double kMagFinal_10_1000_at_10 = 1.5551325009287215733;
inline constexpr double kLogInterval_10_1000_at_100_c1 = -0.2302585092994045684;

// Expectations under continuous beliefs (adaptive quadrature in the oracle).
// The 10,001-point midpoint rule lands within ~2e-8 of these.
inline constexpr double kExpectedDistUniform_5_95 = 3.1284222008401837106;
inline constexpr double kExpectedLinearUniform_5_95 = -0.0475;
inline constexpr double kExpectedMagLogUniformHonest = 2.2120780617546584609;
inline constexpr double kExpectationTolerance = 1e-7;

// Brute-force incentive gaps. Grids: 201 linear points on [-25, 125] for the
// uniform[0,100] belief, 201 log-spaced points on [0.1, 1e5] for the
// log-uniform[1,1e4] belief.
inline constexpr double kDistGapUniform = 0.3680519725068554;
inline constexpr double kDistBestLower = -11.5;
inline constexpr double kDistBestUpper = 111.5;
inline constexpr double kMagGapLogUniform = 0.05469459604476112;
inline constexpr double kMagBestLower = 0.9120108393559097;
inline constexpr double kMagBestUpper = 13489.628825916532;
inline constexpr double kGapTolerance = 1e-6;

}  // namespace calib::fixtures
