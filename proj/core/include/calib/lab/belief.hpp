#pragma once

#include <cstddef>
#include <vector>

#include "calib/scoring/types.hpp"

namespace calib::lab {

// Composite midpoint rule size for continuous beliefs.
inline constexpr std::size_t kQuadraturePoints = 10'001;

struct Atom {
  double value = 0.0;
  double probability = 0.0;
};

using calib::WeightedPoint;

// A forecaster's belief about the true value of an interval question.
class BeliefDistribution {
 public:
  enum class Kind { kUniform, kDiscrete, kLogUniform };

  static BeliefDistribution uniform(double a, double b);
  // Density proportional to 1/x on [a, b], a > 0.
  static BeliefDistribution log_uniform(double a, double b);
  static BeliefDistribution discrete(std::vector<Atom> atoms);
  static BeliefDistribution point_mass(double value);

  Kind kind() const { return kind_; }
  double support_min() const { return lo_; }
  double support_max() const { return hi_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  // Generalized inverse CDF: inf{x : F(x) >= q}, q in (0,1).
  double quantile(double q) const;

  // Exact atoms for discrete beliefs. Continuous beliefs get n midpoints of equal
  // mass, placed uniformly in the coordinate where the density is flat (x for
  // uniform, ln x for log-uniform).
  std::vector<WeightedPoint> quadrature(std::size_t n = kQuadraturePoints) const;

 private:
  BeliefDistribution(Kind kind, double lo, double hi, std::vector<Atom> atoms)
      : kind_(kind), lo_(lo), hi_(hi), atoms_(std::move(atoms)) {}

  Kind kind_;
  double lo_;
  double hi_;
  std::vector<Atom> atoms_;  // sorted by value, merged duplicates
};

}  // namespace calib::lab
