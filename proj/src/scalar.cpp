#include "crnlap/scalar.hpp"

#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "crnlap/error.hpp"

namespace crnlap {

namespace {

void require_positive(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("scalar helpers require strictly positive finite arguments");
  }
}

// Walks from the minimizer in direction `dir` until excess(x) > 0, then
// bisects the sign change and returns the bracket end where excess > 0.
template <typename F>
double outer_root(F excess, double minimizer, double dir) {
  double step = 1e-6 * (1.0 + std::abs(minimizer));
  double inner = minimizer;
  double outer = minimizer + dir * step;
  while (!(excess(outer) > 0.0)) {
    inner = outer;
    step *= 2.0;
    outer = minimizer + dir * step;
  }
  if (excess(inner) < 0.0) {
    boost::math::tools::eps_tolerance<double> tolerance(40);
    const auto bracket = dir > 0 ? boost::math::tools::bisect(excess, inner, outer, tolerance)
                                 : boost::math::tools::bisect(excess, outer, inner, tolerance);
    const double candidate = dir > 0 ? bracket.second : bracket.first;
    if (excess(candidate) > 0.0) outer = candidate;
  }
  return outer;
}

}  // namespace

double log_gap(double a, double b) {
  require_positive(a, b);
  return a * (std::log(a) - std::log(b)) - (a - b);
}

double monotone_gap(double a, double b) {
  require_positive(a, b);
  return (a - b) * (std::log(a) - std::log(b));
}

std::pair<double, double> coercive_bounds(double a, double b) {
  require_positive(a, b);
  auto excess = [a, b](double x) { return b * std::exp(x) - a * x - b; };
  const double minimizer = std::log(a) - std::log(b);
  return {outer_root(excess, minimizer, -1.0), outer_root(excess, minimizer, +1.0)};
}

}  // namespace crnlap
