#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "crnlap/crn.hpp"
#include "crnlap/error.hpp"
#include "crnlap/linalg.hpp"

namespace crnlap {

/// Step control failed; carries the last accepted state.
class StepSizeUnderflow : public Error {
 public:
  StepSizeUnderflow(const std::string& message, double time, StateVector state)
      : Error(message), time_(time), state_(std::move(state)) {}

  double time() const { return time_; }
  const StateVector& state() const { return state_; }

 private:
  double time_;
  StateVector state_;
};

struct IntegrateOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-7;
  /// Accepted components in [-clip_floor, 0) are clamped to 0; anything more
  /// negative rejects the step and halves it.
  double clip_floor = 1e-14;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  std::size_t max_steps = 2'000'000;
  /// Reference equilibrium for Lyapunov monitoring.
  std::optional<StateVector> reference;
  double rank_tol = kDefaultRankTol;
};

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected_error = 0;     // embedded error estimate too large
  std::size_t rejected_negative = 0;  // a component went below -clip_floor
  std::size_t clamped = 0;            // components clamped to 0
  double min_pre_clamp = 0.0;         // smallest component seen before clamping
};

/// Accepted integration nodes with per-node monitors.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<StateVector> derivatives;  // vector field at each node, for Hermite output
  std::vector<double> lyapunov;          // empty without a reference
  std::vector<Eigen::VectorXd> conserved;  // coordinates of P(x(t)) in `conserved_basis`
  Eigen::MatrixXd conserved_basis;         // orthonormal basis of Ker(lap_out S^T)
  StepStats step_stats;

  /// max_t |P(x(t)) - P(x(0))|.
  double conservation_drift() const;

  /// max_n V(t_{n+1}) - V(t_n); 0 without a reference.
  double lyapunov_max_increase() const;
};

/// Integrates x' = -S lap_out^T psi(x) from x0 >= 0 to t_end > 0 with an
/// adaptive Dormand-Prince 5(4) pair. Throws ValidationError on bad input and
/// StepSizeUnderflow when the step size collapses or max_steps is reached.
Trajectory integrate(const CrnSystem& sys, const StateVector& x0, double t_end,
                     const IntegrateOptions& opts = {});

/// Cubic Hermite interpolation between accepted nodes.
StateVector interpolate(const Trajectory& traj, double t);

/// Trajectory sampled on an even grid of spacing dt (plus the final time);
/// monitors are recomputed at the new nodes.
Trajectory resample(const Trajectory& traj, const CrnSystem& sys, double dt,
                    const std::optional<StateVector>& reference = std::nullopt);

/// V(x) = sum_i x_i (ln x_i - ln x*_i) - (x_i - x*_i). Both arguments must be
/// strictly positive (ValidationError otherwise).
double lyapunov_value(const StateVector& x, const StateVector& x_star);

/// Time derivative of V along the flow, x' . Ln(x / x*). Verifies first that
/// psi(x*) is a left null vector of lap_out (InvalidReference otherwise), and
/// throws NumericalFailure if the result exceeds +tol.
double dissipation_check(const CrnSystem& sys, const StateVector& x, const StateVector& x_star,
                         double tol = 1e-9);

struct TimeAverage {
  Eigen::VectorXd average;  // (1/T) integral of psi(x(t)) dt, trapezoidal
  double residual = 0.0;    // |lap_out^T average|
};

TimeAverage time_average_psi(const Trajectory& traj, const CrnSystem& sys);

/// Writes `t,x_1..x_c,V,z_1..z_d`; V is `nan` without a reference.
void write_csv(std::ostream& out, const Trajectory& traj);

}  // namespace crnlap
