#include "crnlap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <boost/numeric/odeint.hpp>

#include "crnlap/deficiency.hpp"

namespace crnlap {

namespace odeint = boost::numeric::odeint;

namespace {

using OdeState = std::vector<double>;

StateVector to_eigen(const OdeState& x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

// V with the boundary limit 0 ln 0 = 0, used while monitoring trajectories
// that may sit on a face of the orthant.
double lyapunov_with_boundary(const StateVector& x, const StateVector& x_star) {
  double v = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    const double si = x_star(i);
    v += (xi > 0.0 ? xi * (std::log(xi) - std::log(si)) : 0.0) - (xi - si);
  }
  return v;
}

void record(Trajectory& traj, double t, const StateVector& x, const StateVector& dxdt,
            const std::optional<StateVector>& reference) {
  traj.times.push_back(t);
  traj.states.push_back(x);
  traj.derivatives.push_back(dxdt);
  if (reference) traj.lyapunov.push_back(lyapunov_with_boundary(x, *reference));
  traj.conserved.push_back(traj.conserved_basis.transpose() * x);
}

void validate_state(const CrnSystem& sys, const StateVector& x) {
  if (x.size() != static_cast<Eigen::Index>(sys.species_count())) {
    throw ValidationError("state has wrong dimension");
  }
  if (!x.allFinite() || (x.array() < 0.0).any()) {
    throw ValidationError("state must be finite and componentwise non-negative");
  }
}

}  // namespace

double Trajectory::conservation_drift() const {
  double drift = 0.0;
  for (const auto& z : conserved) drift = std::max(drift, (z - conserved.front()).norm());
  return drift;
}

double Trajectory::lyapunov_max_increase() const {
  double worst = 0.0;
  for (std::size_t n = 1; n < lyapunov.size(); ++n) worst = std::max(worst, lyapunov[n] - lyapunov[n - 1]);
  return worst;
}

Trajectory integrate(const CrnSystem& sys, const StateVector& x0, double t_end,
                     const IntegrateOptions& opts) {
  validate_state(sys, x0);
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be positive");
  if (opts.reference) {
    validate_state(sys, *opts.reference);
    if (!(opts.reference->array() > 0.0).all()) {
      throw ValidationError("reference equilibrium must be strictly positive");
    }
  }

  // Stage states can dip slightly below zero; the field is evaluated at the
  // positive part so fractional powers stay real.
  auto rhs = [&sys](const OdeState& x, OdeState& dxdt, double) {
    const StateVector clipped = to_eigen(x).cwiseMax(0.0);
    const Eigen::VectorXd f = sys.vector_field(clipped);
    dxdt.assign(f.data(), f.data() + f.size());
  };

  Trajectory traj;
  traj.conserved_basis = conservation_subspace(sys, opts.rank_tol).basis();
  traj.step_stats.min_pre_clamp = x0.minCoeff();

  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<OdeState>>(opts.abs_tol, opts.rel_tol);
  OdeState x(x0.data(), x0.data() + x0.size());
  OdeState dxdt(x.size());
  rhs(x, dxdt, 0.0);
  OdeState x_new(x.size());
  OdeState dxdt_new(x.size());

  double t = 0.0;
  double dt = std::min(opts.initial_step, t_end);
  record(traj, t, x0, to_eigen(dxdt), opts.reference);

  auto underflow = [&](const std::string& why) {
    throw StepSizeUnderflow(why + " at t = " + std::to_string(t), t, to_eigen(x));
  };

  const double end_slack = 1e-13 * t_end;
  while (t_end - t > end_slack) {
    if (traj.step_stats.accepted >= opts.max_steps) underflow("step limit reached");
    dt = std::min(dt, t_end - t);
    if (dt < opts.min_step) underflow("step size underflow");

    double t_try = t;
    double dt_try = dt;
    const auto result = stepper.try_step(rhs, x, dxdt, t_try, x_new, dxdt_new, dt_try);
    if (result == odeint::fail) {
      ++traj.step_stats.rejected_error;
      dt = dt_try;
      continue;
    }

    const StateVector candidate = to_eigen(x_new);
    if (!candidate.allFinite()) {
      ++traj.step_stats.rejected_error;
      dt *= 0.5;
      continue;
    }
    const double lowest = candidate.minCoeff();
    if (lowest < -opts.clip_floor) {
      ++traj.step_stats.rejected_negative;
      dt *= 0.5;
      continue;
    }
    traj.step_stats.min_pre_clamp = std::min(traj.step_stats.min_pre_clamp, lowest);

    // On the face x_j = 0 the field satisfies x_j' >= 0, so clamping tiny
    // negatives to 0 cannot push the solution out of the orthant.
    bool clamped = false;
    for (double& xi : x_new) {
      if (xi < 0.0) {
        xi = 0.0;
        clamped = true;
        ++traj.step_stats.clamped;
      }
    }
    if (clamped) rhs(x_new, dxdt_new, t_try);

    std::swap(x, x_new);
    std::swap(dxdt, dxdt_new);
    t = t_try;
    dt = dt_try;
    ++traj.step_stats.accepted;
    record(traj, t, to_eigen(x), to_eigen(dxdt), opts.reference);
  }
  return traj;
}

StateVector interpolate(const Trajectory& traj, double t) {
  if (traj.times.empty()) throw ValidationError("empty trajectory");
  if (t <= traj.times.front()) return traj.states.front();
  if (t >= traj.times.back()) return traj.states.back();
  const auto it = std::upper_bound(traj.times.begin(), traj.times.end(), t);
  const auto n = static_cast<std::size_t>(it - traj.times.begin()) - 1;
  const double h = traj.times[n + 1] - traj.times[n];
  const double s = (t - traj.times[n]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  const StateVector x = h00 * traj.states[n] + h10 * h * traj.derivatives[n] +
                        h01 * traj.states[n + 1] + h11 * h * traj.derivatives[n + 1];
  return x.cwiseMax(0.0);
}

Trajectory resample(const Trajectory& traj, const CrnSystem& sys, double dt,
                    const std::optional<StateVector>& reference) {
  if (!(dt > 0.0)) throw ValidationError("sampling interval must be positive");
  if (traj.times.empty()) throw ValidationError("empty trajectory");
  Trajectory out;
  out.conserved_basis = traj.conserved_basis;
  out.step_stats = traj.step_stats;
  const double t0 = traj.times.front();
  const double t1 = traj.times.back();
  for (std::size_t n = 0;; ++n) {
    double t = t0 + static_cast<double>(n) * dt;
    const bool last = t >= t1 - 1e-12 * std::max(1.0, std::abs(t1));
    if (last) t = t1;
    const StateVector x = interpolate(traj, t);
    record(out, t, x, sys.vector_field(x), reference);
    if (last) break;
  }
  return out;
}

double lyapunov_value(const StateVector& x, const StateVector& x_star) {
  if (x.size() != x_star.size()) throw ValidationError("dimension mismatch");
  if (!(x.array() > 0.0).all() || !(x_star.array() > 0.0).all()) {
    throw ValidationError("Lyapunov function needs strictly positive arguments");
  }
  return lyapunov_with_boundary(x, x_star);
}

double dissipation_check(const CrnSystem& sys, const StateVector& x, const StateVector& x_star,
                         double tol) {
  const auto c = static_cast<Eigen::Index>(sys.species_count());
  if (x.size() != c || x_star.size() != c) throw ValidationError("state has wrong dimension");
  if (!(x.array() > 0.0).all() || !(x_star.array() > 0.0).all()) {
    throw ValidationError("dissipation check needs strictly positive states");
  }
  const Eigen::VectorXd psi_star = sys.psi(x_star);
  const double left_residual = (sys.lap_out().transpose() * psi_star).norm();
  if (left_residual > tol * std::max(1.0, sys.lap_out().norm()) * std::max(1.0, psi_star.norm())) {
    throw InvalidReference("psi(x*) is not a left null vector of lap_out (residual " +
                           std::to_string(left_residual) + ")");
  }
  const Eigen::VectorXd field = sys.vector_field(x);
  const Eigen::VectorXd log_ratio = (x.array() / x_star.array()).log().matrix();
  const double vdot = field.dot(log_ratio);
  if (vdot > tol * std::max(1.0, field.norm() * log_ratio.norm())) {
    throw NumericalFailure("Lyapunov derivative is positive: " + std::to_string(vdot));
  }
  return vdot;
}

TimeAverage time_average_psi(const Trajectory& traj, const CrnSystem& sys) {
  if (traj.states.empty()) throw ValidationError("empty trajectory");
  TimeAverage out;
  Eigen::VectorXd previous = sys.psi(traj.states.front());
  if (traj.states.size() == 1) {
    out.average = previous;
  } else {
    out.average = Eigen::VectorXd::Zero(previous.size());
    for (std::size_t n = 1; n < traj.states.size(); ++n) {
      const Eigen::VectorXd current = sys.psi(traj.states[n]);
      out.average += 0.5 * (traj.times[n] - traj.times[n - 1]) * (previous + current);
      previous = current;
    }
    const double span = traj.times.back() - traj.times.front();
    if (span > 0.0) {
      out.average /= span;
    } else {
      out.average = previous;
    }
  }
  out.residual = (sys.lap_out().transpose() * out.average).norm();
  return out;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  const Eigen::Index c = traj.states.empty() ? 0 : traj.states.front().size();
  const Eigen::Index d = traj.conserved_basis.cols();
  out << "t";
  for (Eigen::Index i = 1; i <= c; ++i) out << ",x_" << i;
  out << ",V";
  for (Eigen::Index i = 1; i <= d; ++i) out << ",z_" << i;
  out << '\n';

  const auto old_precision = out.precision(15);
  for (std::size_t n = 0; n < traj.times.size(); ++n) {
    out << traj.times[n];
    for (Eigen::Index i = 0; i < c; ++i) out << ',' << traj.states[n](i);
    out << ',';
    if (traj.lyapunov.empty()) {
      out << "nan";
    } else {
      out << traj.lyapunov[n];
    }
    for (Eigen::Index i = 0; i < d; ++i) out << ',' << traj.conserved[n](i);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace crnlap
