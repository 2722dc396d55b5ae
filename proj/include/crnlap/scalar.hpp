#pragma once

#include <utility>

namespace crnlap {

// Scalar inequalities behind the Lyapunov and coercivity arguments. All
// arguments must be strictly positive; ValidationError otherwise.

/// a (ln a - ln b) - (a - b); non-negative, zero iff a == b.
double log_gap(double a, double b);

/// (a - b)(ln a - ln b); non-negative, zero iff a == b.
double monotone_gap(double a, double b);

/// Returns x_minus < x_plus such that b e^x - a x > b for every x outside
/// [x_minus, x_plus]. The interval brackets the minimizer ln a - ln b.
std::pair<double, double> coercive_bounds(double a, double b);

}  // namespace crnlap
