#pragma once

#include <map>
#include <string>
#include <vector>

#include "lieavg/coeffs.hpp"
#include "lieavg/lbs.hpp"
#include "lieavg/sim.hpp"
#include "lieavg/system.hpp"

namespace lieavg {

/// Interval (lo, hi) or [lo, hi) when lo_closed.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool empty() const { return !(lo < hi); }
};

struct OrderVerdict {
  int r = 0;
  Interval p_star;         // max p_i <= p* < min(r/(r+1), min(p_i/2 + 1/2))
  bool p_star_feasible = false;
  bool limit_bounded = false;   // every retained unbounded term vanishes identically
  std::vector<std::string> unbounded_terms;  // offending terms, e.g. "nu2(1,3)"
  bool holds = false;
};

struct DesignReport {
  int m = 0;
  int r = 0;
  std::vector<double> p;
  double omega = 0.0;
  double p_star = 0.0;                 // max p_i, used for epsilon
  double epsilon = 0.0;                // omega^{p* - 1}
  Interval canonical_range;            // (0, min(p_i/2 + 1/2))
  Interval unit_order_range;           // [max p_i, 1), perturbation of order epsilon
  bool unit_order_feasible = false;    // canonical range meets [max p, 1)
  double half_order_bound = 0.0;       // p* >= 2 max p_i - 1 for O(eps^{1/2})
  bool half_order_feasible = false;
  std::vector<OrderVerdict> order_bound;     // one per order 2..r
  bool order_bound_holds = false;            // verdict at the requested r
  bool joint_infeasible = false;       // O(eps) and p* < r/(r+1) cannot both hold
  // Sum rule: m inputs with sum p = m - 1 and r >= m.
  double sum_rule_residual = 0.0;          // sum p - (m - 1)
  bool sum_rule_sum_ok = false;
  bool sum_rule_near_miss = false;         // |residual| <= 0.05 but above tolerance
  bool sum_rule_order_ok = false;          // r >= m
  bool sum_rule_limit_bounded = false;
  bool sum_rule_holds = false;
  bool complete_averaging = false;
  int asymptote_order = 0;             // order of the asymptote when complete_averaging
  // family -> class -> count
  std::map<std::string, std::map<std::string, int>> family_summary;
};

DesignReport check_design(const ControlAffineSystem& sys, int r, const QuadratureOptions& qopt = {});

struct SweepPoint {
  double omega = 0.0;
  double epsilon = 0.0;
  double d_sup = 0.0;
  double d_rms = 0.0;
  bool ok = true;
  std::string error;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double slope = 0.0;       // least-squares slope of log d_sup vs log epsilon
  double slope_lo = 0.0;    // 95% confidence band
  double slope_hi = 0.0;
  int fit_points = 0;
  bool strictly_decreasing = false;  // d_sup over increasing omega
};

struct SweepOptions {
  double t_final = 50.0;
  double dt = 1e-3;   // user step, capped by the oscillation rule
  int threads = 0;    // 0: LIEAVG_THREADS or hardware concurrency
  QuadratureOptions quadrature;
};

SweepResult sweep_omega(const ControlAffineSystem& sys, int r, const std::vector<double>& omegas,
                        const std::vector<double>& x0, const SweepOptions& opt = {});

struct ComparisonRun {
  Trajectory original;
  Trajectory lbs;
  Distance distance;
};

/// Simulates the original system and its r-order LBS on aligned grids.
ComparisonRun run_comparison(const ControlAffineSystem& sys, int r, const CoefficientTable& table,
                             const std::vector<double>& x0, double t_final, double user_dt);

/// Worker count from LIEAVG_THREADS (or hardware concurrency), capped by jobs.
int worker_count(int requested, int jobs);

}  // namespace lieavg
