#include "calib/lab/belief.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calib/error.hpp"

namespace calib::lab {
namespace {

constexpr double kMassTolerance = 1e-9;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

BeliefDistribution BeliefDistribution::uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform belief needs a < b");
  return BeliefDistribution(Kind::kUniform, a, b, {});
}

BeliefDistribution BeliefDistribution::log_uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a > 0.0 && a < b,
          "log-uniform belief needs 0 < a < b");
  return BeliefDistribution(Kind::kLogUniform, a, b, {});
}

BeliefDistribution BeliefDistribution::discrete(std::vector<Atom> atoms) {
  require(!atoms.empty(), "discrete belief needs at least one atom");
  double mass = 0.0;
  for (const Atom& atom : atoms) {
    require(std::isfinite(atom.value), "atom values must be finite");
    require(atom.probability >= 0.0 && atom.probability <= 1.0, "atom probability outside [0,1]");
    mass += atom.probability;
  }
  require(std::abs(mass - 1.0) <= kMassTolerance, "atom probabilities must sum to 1");

  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> merged;
  for (const Atom& atom : atoms) {
    if (!merged.empty() && merged.back().value == atom.value) {
      merged.back().probability += atom.probability;
    } else {
      merged.push_back(atom);
    }
  }
  const double lo = merged.front().value;
  const double hi = merged.back().value;
  return BeliefDistribution(Kind::kDiscrete, lo, hi, std::move(merged));
}

BeliefDistribution BeliefDistribution::point_mass(double value) {
  return discrete({Atom{value, 1.0}});
}

double BeliefDistribution::quantile(double q) const {
  require(q > 0.0 && q < 1.0, "quantile level must lie in (0,1)");
  switch (kind_) {
    case Kind::kUniform:
      return lo_ + q * (hi_ - lo_);
    case Kind::kLogUniform:
      return lo_ * std::pow(hi_ / lo_, q);
    case Kind::kDiscrete: {
      double cumulative = 0.0;
      for (const Atom& atom : atoms_) {
        cumulative += atom.probability;
        if (cumulative >= q - kMassTolerance) return atom.value;
      }
      return atoms_.back().value;
    }
  }
  return lo_;
}

std::vector<WeightedPoint> BeliefDistribution::quadrature(std::size_t n) const {
  if (kind_ == Kind::kDiscrete) {
    std::vector<WeightedPoint> points;
    points.reserve(atoms_.size());
    for (const Atom& atom : atoms_) points.push_back({atom.value, atom.probability});
    return points;
  }
  require(n > 0, "quadrature needs at least one node");
  const double weight = 1.0 / static_cast<double>(n);
  const bool log_scale = kind_ == Kind::kLogUniform;
  const double a = log_scale ? std::log(lo_) : lo_;
  const double b = log_scale ? std::log(hi_) : hi_;
  const double h = (b - a) / static_cast<double>(n);
  std::vector<WeightedPoint> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = a + (static_cast<double>(i) + 0.5) * h;
    points[i] = {log_scale ? std::exp(u) : u, weight};
  }
  return points;
}

}  // namespace calib::lab
