#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "lieavg/lbs.hpp"
#include "lieavg/presets.hpp"
#include "lieavg/sim.hpp"

using namespace lieavg;

namespace {

Trajectory constant(double value, int samples, double dt) {
  Trajectory tr;
  tr.n = 1;
  for (int i = 0; i < samples; ++i) {
    tr.t.push_back(i * dt);
    tr.x.push_back({value});
  }
  return tr;
}

double decay_error(double dt) {
  Rhs rhs = [](double, std::span<const double> x, std::span<double> dx) { dx[0] = -x[0]; };
  const std::vector<double> x0{1.0};
  auto tr = integrate(rhs, x0, 0.0, 1.0, {.dt = dt});
  return std::abs(tr.x.back()[0] - std::exp(-1.0));
}

}  // namespace

TEST_CASE("zero right-hand side keeps the state") {
  Rhs rhs = [](double, std::span<const double>, std::span<double> dx) {
    for (auto& v : dx) v = 0.0;
  };
  const std::vector<double> x0{4.0, 0.0};
  auto tr = integrate(rhs, x0, 0.0, 2.0, {.dt = 0.1});
  CHECK(tr.size() == 21);
  for (const auto& x : tr.x) CHECK(x == x0);
  CHECK(tr.t.back() == 2.0);
}

TEST_CASE("exponential decay") {
  CHECK(decay_error(1e-3) < 1e-9);
  const double ratio = decay_error(0.02) / decay_error(0.01);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("divergence stops the record") {
  Rhs rhs = [](double, std::span<const double> x, std::span<double> dx) { dx[0] = x[0] * x[0]; };
  const std::vector<double> x0{1.0};
  auto tr = integrate(rhs, x0, 0.0, 2.0, {.dt = 1e-3});
  CHECK(tr.diverged);
  CHECK(tr.divergence_time <= 1.01);
  CHECK(tr.t_end() < 1.01);
}

TEST_CASE("oscillatory step rule") {
  ControlAffineSystem sys(build_preset("example3").config.system);
  const double fastest = 1.5 * 100.0;
  CHECK(oscillatory_step(sys, 1.0) == doctest::Approx(2 * std::numbers::pi / (fastest * 40)));
  CHECK(oscillatory_step(sys, 1e-5) == 1e-5);
}

TEST_CASE("compare") {
  auto a = constant(0.0, 11, 0.1), b = constant(1.0, 11, 0.1);
  auto self = compare(a, a);
  CHECK(self.sup == 0.0);
  CHECK(self.rms == 0.0);
  auto d = compare(a, b);
  CHECK(d.sup == doctest::Approx(1.0));
  CHECK(d.rms == doctest::Approx(1.0));

  Trajectory c;
  c.n = 1;
  for (int i = 0; i <= 40; ++i) {
    c.t.push_back(i * 0.025);
    c.x.push_back({std::sin(c.t.back())});
  }
  Trajectory e;
  e.n = 1;
  for (int i = 0; i <= 30; ++i) {
    e.t.push_back(i / 30.0);
    e.x.push_back({std::sin(e.t.back()) + 0.1 * e.t.back()});
  }
  auto ce = compare(c, e), ec = compare(e, c);
  CHECK(ce.sup == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(std::abs(ce.sup - ec.sup) <= 1e-9);

  auto late = constant(0.0, 5, 0.1);
  for (auto& t : late.t) t += 10.0;
  CHECK_THROWS(compare(a, late));
}

TEST_CASE("efforts") {
  ControlAffineSystem sys(build_preset("example1").config.system);
  Trajectory tr;
  tr.n = 1;
  tr.m = 1;
  const double omega = 3.0, T = 2 * std::numbers::pi / omega;
  const int N = 2000;
  for (int i = 0; i <= N; ++i) {
    const double t = T * i / N;
    tr.t.push_back(t);
    tr.x.push_back({2.0});
    tr.u.push_back({std::sin(omega * t)});
  }
  auto e = efforts(tr);
  CHECK(e.control.back() == doctest::Approx(T / 2).epsilon(1e-5));
  CHECK(e.state.back() == doctest::Approx(4.0 * T).epsilon(1e-12));
  for (std::size_t i = 1; i < e.t.size(); ++i) {
    CHECK(e.control[i] >= e.control[i - 1]);
    CHECK(e.state[i] >= e.state[i - 1]);
  }

  for (auto& u : tr.u) u[0] = 0.0;
  auto z = efforts(tr);
  CHECK(z.control.back() == 0.0);

  Trajectory bare = constant(1.0, 5, 0.1);
  CHECK_THROWS(efforts(bare));
}

TEST_CASE("full-state effort") {
  Trajectory tr = constant(0.0, 3, 0.5);
  tr.n = 2;
  tr.m = 1;
  for (auto& x : tr.x) x = {1.0, 2.0};
  tr.u.assign(3, {0.0});
  CHECK(efforts(tr).state.back() == doctest::Approx(1.0));
  CHECK(efforts(tr, true).state.back() == doctest::Approx(5.0));
}

TEST_CASE("original system records inputs") {
  ControlAffineSystem sys(build_preset("example1").config.system);
  const std::vector<double> x0{4.0, 0.0};
  auto tr = simulate_original(sys, x0, 0.5, 1e-3);
  CHECK(tr.m == 2);
  CHECK(tr.u.size() == tr.size());
  CHECK(tr.u[0][0] == 0.0);
  CHECK(tr.u[0][1] == 1.0);
  CHECK(tr.t.back() == doctest::Approx(0.5));
}

TEST_CASE("settling and exit times") {
  Trajectory tr;
  tr.n = 1;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i * 0.01;
    tr.t.push_back(t);
    tr.x.push_back({1.0 + 3.0 * std::exp(-t)});
  }
  const double ts = settling_time(tr, 0, 1.0, 0.3, 0.0);
  CHECK(ts == doctest::Approx(std::log(10.0)).epsilon(0.01));
  CHECK(std::isinf(settling_time(tr, 0, 1.0, 1e-9, 0.0)));
  const std::vector<double> lo{0.0}, hi{3.0};
  CHECK(exit_time(tr, lo, hi) == 0.0);
  const std::vector<double> hi2{5.0};
  CHECK(std::isinf(exit_time(tr, lo, hi2)));
}

TEST_CASE("CSV output") {
  ControlAffineSystem sys(build_preset("example1").config.system);
  const std::vector<double> x0{4.0, 0.0};
  auto tr = simulate_original(sys, x0, 0.01, 1e-3);
  std::ostringstream os;
  write_csv(tr, os);
  const std::string csv = os.str();
  CHECK(csv.rfind("t,x1,x2,u1,u2\n", 0) == 0);
  CHECK(format_double(0.1) == "0.10000000000000001");
}
