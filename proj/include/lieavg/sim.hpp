#pragma once

#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lieavg/lbs.hpp"
#include "lieavg/system.hpp"

namespace lieavg {

using Rhs = std::function<void(double t, std::span<const double> x, std::span<double> dx)>;

struct Trajectory {
  int n = 0;
  int m = 0;                          // input columns, 0 when not recorded
  std::vector<double> t;
  std::vector<std::vector<double>> x;  // one row per sample
  std::vector<std::vector<double>> u;  // per-sample inputs when m > 0
  bool diverged = false;
  double divergence_time = std::numeric_limits<double>::quiet_NaN();
  std::string divergence_reason;

  std::size_t size() const { return t.size(); }
  double t_end() const { return t.empty() ? 0.0 : t.back(); }
  std::vector<double> column(int c) const;
};

struct StepRule {
  double dt = 1e-3;                 // user step
  double divergence_bound = 1e8;    // |x_i| above this counts as divergence
};

/// Fixed-step classical RK4 over [t0, t1]. The step is span / ceil(span / dt)
/// so the grid ends exactly at t1. Non-finite states stop the record.
Trajectory integrate(const Rhs& rhs, std::span<const double> x0, double t0, double t1, const StepRule& rule);

/// min(dt, 2*pi / (omega * k_max * 40)).
double oscillatory_step(const ControlAffineSystem& sys, double user_dt);

Trajectory simulate_original(const ControlAffineSystem& sys, std::span<const double> x0, double t_final,
                             double user_dt, bool record_inputs = true);
Trajectory simulate_lbs(const AveragedSystem& avg, std::span<const double> x0, double t_final, double dt);

struct Distance {
  double sup = 0.0;
  double rms = 0.0;
};

/// Euclidean state distance over the common span. b is resampled onto a's
/// grid with a cubic (modified Akima) interpolant unless the grids coincide.
Distance compare(const Trajectory& a, const Trajectory& b);
/// Per-sample distance on a's grid restricted to the common span.
std::vector<std::pair<double, double>> distance_series(const Trajectory& a, const Trajectory& b);

struct Efforts {
  std::vector<double> t;
  std::vector<double> control;  // int_0^t sum_i u_i^2
  std::vector<double> state;    // int_0^t x1^2 (or |x|^2)
};

Efforts efforts(const Trajectory& traj, bool full_state = false);

/// Earliest time after which the moving average (over `window` seconds) of
/// component c stays within tol of target. Infinity if it never settles.
double settling_time(const Trajectory& traj, int c, double target, double tol, double window);

/// First time the state leaves the box, or infinity.
double exit_time(const Trajectory& traj, std::span<const double> lo, std::span<const double> hi);

/// CSV with header t,x1..xn[,u1..um]; 17 significant digits.
void write_csv(const Trajectory& traj, std::ostream& os);
std::string format_double(double v);

}  // namespace lieavg
