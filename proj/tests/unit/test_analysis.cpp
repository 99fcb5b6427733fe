#include <doctest.h>

#include <cmath>

#include "lieavg/analysis.hpp"
#include "lieavg/presets.hpp"

using namespace lieavg;

namespace {

SystemSpec pair_spec(double p1, double p2) {
  auto spec = build_preset("example1").config.system;
  spec.channels[0].p = p1;
  spec.channels[1].p = p2;
  return spec;
}

}  // namespace

TEST_CASE("Example 1 satisfies the sum rule") {
  ControlAffineSystem sys(build_preset("example1").config.system);
  auto rep = check_design(sys, 2);
  CHECK(rep.m == 2);
  CHECK(rep.sum_rule_sum_ok);
  CHECK(rep.sum_rule_order_ok);
  CHECK(rep.sum_rule_holds);
  CHECK(rep.complete_averaging);
  CHECK(rep.asymptote_order == 2);
  CHECK(rep.p_star == 0.5);
  CHECK(rep.epsilon == doctest::Approx(std::pow(20.0, -0.5)));
  CHECK(rep.canonical_range.hi == doctest::Approx(0.75));
  CHECK(rep.unit_order_feasible);
}

TEST_CASE("Example 2 is a near miss of the sum rule") {
  ControlAffineSystem sys(build_preset("example2").config.system);
  auto rep = check_design(sys, 3);
  CHECK(rep.sum_rule_residual == doctest::Approx(-0.02).epsilon(1e-9));
  CHECK_FALSE(rep.sum_rule_sum_ok);
  CHECK(rep.sum_rule_near_miss);
  CHECK_FALSE(rep.sum_rule_holds);
  CHECK_FALSE(rep.order_bound_holds);
  REQUIRE(rep.order_bound.size() == 2);
  CHECK_FALSE(rep.order_bound.back().p_star_feasible);
}

TEST_CASE("large exponents make the scaling conditions incompatible") {
  ControlAffineSystem sys(pair_spec(0.9, 0.9));
  auto rep = check_design(sys, 2);
  CHECK(rep.canonical_range.lo == 0.0);
  CHECK(rep.canonical_range.hi == doctest::Approx(0.95));
  CHECK(rep.unit_order_range.lo == doctest::Approx(0.9));
  CHECK(rep.unit_order_range.lo_closed);
  CHECK(rep.joint_infeasible);
  CHECK_FALSE(rep.order_bound_holds);
  CHECK(rep.half_order_bound == doctest::Approx(0.8));
}

TEST_CASE("verdicts are invariant under channel permutation") {
  auto spec = build_preset("example3").config.system;
  ControlAffineSystem a(spec);
  std::swap(spec.channels[0], spec.channels[3]);
  std::swap(spec.channels[1], spec.channels[2]);
  ControlAffineSystem b(spec);
  for (int r : {2, 3, 4}) {
    auto ra = check_design(a, r), rb = check_design(b, r);
    CHECK(ra.p_star == rb.p_star);
    CHECK(ra.canonical_range.hi == rb.canonical_range.hi);
    CHECK(ra.unit_order_feasible == rb.unit_order_feasible);
    CHECK(ra.joint_infeasible == rb.joint_infeasible);
    CHECK(ra.order_bound_holds == rb.order_bound_holds);
    CHECK(ra.sum_rule_holds == rb.sum_rule_holds);
    CHECK(ra.sum_rule_residual == doctest::Approx(rb.sum_rule_residual));
    CHECK(ra.complete_averaging == rb.complete_averaging);
    CHECK(ra.family_summary == rb.family_summary);
  }
}

TEST_CASE("family summary counts classes") {
  ControlAffineSystem sys(build_preset("example1").config.system);
  auto rep = check_design(sys, 4);
  CHECK(rep.family_summary.at("nu2").at("bounded") == 1);
  CHECK(rep.family_summary.at("nu3").at("vanishing") == 2);
  CHECK(rep.order_bound.size() == 3);
}

TEST_CASE("sweep over a short horizon") {
  ControlAffineSystem sys(build_preset("example1").config.system);
  SweepOptions opt;
  opt.t_final = 2.0;
  opt.threads = 2;
  const std::vector<double> omegas{20, 40, 80};
  const std::vector<double> x0{4.0, 0.0};
  auto a = sweep_omega(sys, 2, omegas, x0, opt);
  REQUIRE(a.points.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.points[i].ok);
    CHECK(a.points[i].omega == omegas[i]);
    CHECK(a.points[i].epsilon == doctest::Approx(std::pow(omegas[i], -0.5)));
    CHECK(std::isfinite(a.points[i].d_sup));
    CHECK(a.points[i].d_sup >= a.points[i].d_rms);
  }
  CHECK(a.fit_points == 3);
  CHECK(std::isfinite(a.slope));

  opt.threads = 1;
  auto b = sweep_omega(sys, 2, omegas, x0, opt);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.points[i].d_sup == b.points[i].d_sup);
    CHECK(a.points[i].d_rms == b.points[i].d_rms);
  }
  CHECK(a.slope == b.slope);
}

TEST_CASE("sweep input checks") {
  ControlAffineSystem sys(build_preset("example1").config.system);
  const std::vector<double> x0{4.0, 0.0};
  CHECK_THROWS(sweep_omega(sys, 2, {20, 40}, x0));
  CHECK_THROWS(sweep_omega(sys, 2, {20, 40, 30}, x0));
}

TEST_CASE("self-comparison is zero") {
  ControlAffineSystem sys(build_preset("example1").config.system);
  const std::vector<double> x0{4.0, 0.0};
  for (double omega : {20.0, 40.0, 80.0}) {
    auto s = sys.with_omega(omega);
    auto a = simulate_original(s, x0, 1.0, 1e-3);
    auto b = simulate_original(s.with_omega(omega), x0, 1.0, 1e-3);
    auto d = compare(a, b);
    CHECK(d.sup == 0.0);
    CHECK(d.rms == 0.0);
  }
}

TEST_CASE("comparison run aligns grids") {
  ControlAffineSystem sys(build_preset("example1").config.system);
  auto table = build_table(sys, 2);
  auto run = run_comparison(sys, 2, table, {4.0, 0.0}, 1.0, 1e-3);
  CHECK(run.original.t == run.lbs.t);
  CHECK(std::isfinite(run.distance.sup));
  CHECK(run.distance.sup > 0.0);
}

TEST_CASE("worker count") {
  CHECK(worker_count(3, 10) == 3);
  CHECK(worker_count(8, 2) == 2);
  CHECK(worker_count(0, 5) >= 1);
}
