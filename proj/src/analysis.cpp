#include "lieavg/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "lieavg/errors.hpp"

namespace lieavg {

namespace {

std::string term_name(const Coefficient& c) {
  std::string s = family_name(c.family);
  s += "(";
  for (std::size_t i = 0; i < c.indices.size(); ++i) s += (i ? "," : "") + std::to_string(c.indices[i]);
  return s + ")";
}

// Unbounded terms of orders 2..upto whose coefficient and bracket do not both vanish.
std::vector<std::string> unbounded_terms(const ControlAffineSystem& sys, const CoefficientTable& table, int upto) {
  std::vector<std::string> bad;
  for (const auto& bt : enumerate_brackets(sys.m(), upto)) {
    const Coefficient& c = table.at(bt.family, bt.indices);
    if (c.cls != Boundedness::Unbounded) continue;
    if (std::abs(c.value) <= 1e-9) continue;
    if (zero_check(bt.expr, sys).zero) continue;
    bad.push_back(term_name(c));
  }
  return bad;
}

}  // namespace

DesignReport check_design(const ControlAffineSystem& sys, int r, const QuadratureOptions& qopt) {
  if (r < 1 || r > 4) throw ConfigError("truncation order r must be in 1..4");
  DesignReport rep;
  rep.m = sys.m();
  rep.r = r;
  rep.p = sys.p();
  rep.omega = sys.omega();
  const double pmax = *std::max_element(rep.p.begin(), rep.p.end());
  double lemma_hi = 1.0;
  for (double p : rep.p) lemma_hi = std::min(lemma_hi, p / 2.0 + 0.5);
  rep.p_star = pmax;
  rep.epsilon = std::pow(sys.omega(), pmax - 1.0);
  rep.canonical_range = {0.0, lemma_hi, false};
  rep.unit_order_range = {pmax, 1.0, true};
  rep.unit_order_feasible = pmax < lemma_hi && pmax < 1.0;
  rep.half_order_bound = 2.0 * pmax - 1.0;
  rep.half_order_feasible = std::max(0.0, rep.half_order_bound) < lemma_hi;

  const int table_order = std::max(r, std::min(rep.m, 4));
  CoefficientTable table = build_table(sys, std::max(table_order, 2), qopt);

  for (int rr = 2; rr <= r; ++rr) {
    OrderVerdict v;
    v.r = rr;
    v.p_star = {pmax, std::min(lemma_hi, static_cast<double>(rr) / (rr + 1)), true};
    v.p_star_feasible = !v.p_star.empty();
    v.unbounded_terms = unbounded_terms(sys, table, rr);
    v.limit_bounded = v.unbounded_terms.empty();
    v.holds = v.p_star_feasible && v.limit_bounded;
    rep.order_bound.push_back(v);
  }
  if (r >= 2) {
    rep.order_bound_holds = rep.order_bound.back().holds;
    rep.joint_infeasible = !(pmax < static_cast<double>(r) / (r + 1));
  }

  double sum = 0.0;
  for (double p : rep.p) sum += p;
  rep.sum_rule_residual = sum - (rep.m - 1);
  rep.sum_rule_sum_ok = std::abs(rep.sum_rule_residual) <= 1e-9;
  rep.sum_rule_near_miss = !rep.sum_rule_sum_ok && std::abs(rep.sum_rule_residual) <= 0.05;
  rep.sum_rule_order_ok = r >= rep.m;
  if (rep.m >= 2) {
    rep.sum_rule_limit_bounded = unbounded_terms(sys, table, std::min(rep.m, 4)).empty();
  } else {
    rep.sum_rule_limit_bounded = true;
  }
  rep.sum_rule_holds = rep.sum_rule_sum_ok && rep.sum_rule_order_ok && rep.sum_rule_limit_bounded;

  rep.complete_averaging = rep.order_bound_holds || rep.sum_rule_holds;
  if (rep.order_bound_holds) rep.asymptote_order = r;
  else if (rep.sum_rule_holds) rep.asymptote_order = rep.m;

  for (const auto& c : table.entries) {
    if (family_order(c.family) > r) continue;
    rep.family_summary[family_name(c.family)][boundedness_name(c.cls)] += 1;
  }
  return rep;
}

int worker_count(int requested, int jobs) {
  int w = requested;
  if (w <= 0) {
    if (const char* env = std::getenv("LIEAVG_THREADS")) w = std::atoi(env);
  }
  if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
  if (w <= 0) w = 1;
  return std::max(1, std::min(w, jobs));
}

ComparisonRun run_comparison(const ControlAffineSystem& sys, int r, const CoefficientTable& table,
                             const std::vector<double>& x0, double t_final, double user_dt) {
  ComparisonRun run;
  const double dt = oscillatory_step(sys, user_dt);
  run.original = simulate_original(sys, x0, t_final, dt);
  AveragedSystem avg = assemble(sys, r, table, sys.omega());
  run.lbs = simulate_lbs(avg, x0, t_final, dt);
  run.distance = compare(run.original, run.lbs);
  return run;
}

SweepResult sweep_omega(const ControlAffineSystem& sys, int r, const std::vector<double>& omegas,
                        const std::vector<double>& x0, const SweepOptions& opt) {
  if (omegas.size() < 3) throw ConfigError("sweep needs at least 3 omega values");
  for (std::size_t i = 1; i < omegas.size(); ++i)
    if (!(omegas[i] > omegas[i - 1])) throw ConfigError("omega values must be strictly increasing");
  const CoefficientTable table = build_table(sys, std::max(r, 1), opt.quadrature);
  const auto p = sys.p();
  const double pmax = *std::max_element(p.begin(), p.end());

  SweepResult res;
  res.points.resize(omegas.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= omegas.size()) return;
      SweepPoint& pt = res.points[i];
      pt.omega = omegas[i];
      pt.epsilon = std::pow(omegas[i], pmax - 1.0);
      try {
        ControlAffineSystem s = sys.with_omega(omegas[i]);
        ComparisonRun run = run_comparison(s, r, table, x0, opt.t_final, opt.dt);
        if (run.original.diverged || run.lbs.diverged) {
          pt.ok = false;
          pt.error = run.original.diverged ? "original diverged: " + run.original.divergence_reason
                                           : "lbs diverged: " + run.lbs.divergence_reason;
        }
        pt.d_sup = run.distance.sup;
        pt.d_rms = run.distance.rms;
      } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
        pt.d_sup = pt.d_rms = NAN;
      }
    }
  };
  const int workers = worker_count(opt.threads, static_cast<int>(omegas.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  res.strictly_decreasing = true;
  for (std::size_t i = 1; i < res.points.size(); ++i)
    if (!(res.points[i].ok && res.points[i - 1].ok && res.points[i].d_sup < res.points[i - 1].d_sup))
      res.strictly_decreasing = false;

  std::vector<double> xs, ys;
  for (const auto& pt : res.points)
    if (pt.ok && pt.d_sup > 0.0 && std::isfinite(pt.d_sup)) {
      xs.push_back(std::log(pt.epsilon));
      ys.push_back(std::log(pt.d_sup));
    }
  res.fit_points = static_cast<int>(xs.size());
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    res.slope = sxx > 0 ? sxy / sxx : 0.0;
    res.slope_lo = res.slope_hi = res.slope;
    if (xs.size() >= 3 && sxx > 0) {
      double ssr = 0;
      const double b0 = my - res.slope * mx;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (b0 + res.slope * xs[i]);
        ssr += e * e;
      }
      const double se = std::sqrt(ssr / (n - 2) / sxx);
      boost::math::students_t dist(n - 2);
      const double tq = boost::math::quantile(boost::math::complement(dist, 0.025));
      res.slope_lo = res.slope - tq * se;
      res.slope_hi = res.slope + tq * se;
    }
  }
  return res;
}

}  // namespace lieavg
