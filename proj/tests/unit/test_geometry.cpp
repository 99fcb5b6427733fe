#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lieavg/errors.hpp"
#include "lieavg/geometry.hpp"
#include "lieavg/presets.hpp"

using namespace lieavg;

namespace {

std::string random_poly(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> var(1, n), deg(0, 3);
  std::ostringstream ss;
  ss.precision(17);
  for (int t = 0; t < 4; ++t) {
    ss << (t ? "+" : "") << "(" << coef(rng) << ")";
    for (int d = deg(rng); d > 0; --d) ss << "*x" << var(rng);
  }
  return ss.str();
}

// Four channels with random polynomial fields in R^3; channel 4 is 2.5 * channel 1.
ControlAffineSystem random_system(unsigned seed) {
  std::mt19937 rng(seed);
  SystemSpec s;
  s.name = "random";
  s.n = 3;
  s.drift = {random_poly(rng, 3), random_poly(rng, 3), random_poly(rng, 3)};
  for (int i = 0; i < 3; ++i)
    s.channels.push_back({{random_poly(rng, 3), random_poly(rng, 3), random_poly(rng, 3)},
                          0.5,
                          Rational(1),
                          {"sin(s)", std::nullopt}});
  ChannelSpec scaled = s.channels[0];
  for (auto& c : scaled.components) c = "2.5*(" + c + ")";
  s.channels.push_back(scaled);
  s.box_lo = {-1, -1, -1};
  s.box_hi = {1, 1, 1};
  return ControlAffineSystem(s);
}

std::vector<double> values(const std::vector<Jet>& js) {
  std::vector<double> v;
  for (const auto& j : js) v.push_back(j.value());
  return v;
}

double norm_inf(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<std::vector<double>> random_points(unsigned seed, int count, int n) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<std::vector<double>> pts(count, std::vector<double>(n));
  for (auto& p : pts)
    for (auto& v : p) v = d(rng);
  return pts;
}

}  // namespace

TEST_CASE("constant fields commute") {
  SystemSpec s;
  s.n = 2;
  s.drift = {"0", "0"};
  s.channels.push_back({{"1", "2"}, 0.5, Rational(1), {"sin(s)", std::nullopt}});
  s.channels.push_back({{"-3", "0.5"}, 0.5, Rational(1), {"cos(s)", std::nullopt}});
  s.box_lo = {-1, -1};
  s.box_hi = {1, 1};
  ControlAffineSystem sys(s);
  const std::vector<double> x{0.2, 0.3};
  auto v = values(bracket_jet(br(leaf(1), leaf(2)), sys, x, 0));
  CHECK(v == std::vector<double>{0.0, 0.0});
  CHECK(zero_check(br(leaf(1), leaf(2)), sys).provenance == ZeroProvenance::Structural);
}

TEST_CASE("scalar bracket of x and x^2") {
  SystemSpec s;
  s.n = 1;
  s.drift = {"0"};
  s.channels.push_back({{"x1"}, 0.5, Rational(1), {"sin(s)", std::nullopt}});
  s.channels.push_back({{"x1^2"}, 0.5, Rational(1), {"cos(s)", std::nullopt}});
  s.box_lo = {-1};
  s.box_hi = {4};
  ControlAffineSystem sys(s);
  const std::vector<double> x{3.0};
  CHECK(bracket_jet(br(leaf(1), leaf(2)), sys, x, 0)[0].value() == doctest::Approx(9.0));
}

TEST_CASE("Example 1 bracket at x=4") {
  ControlAffineSystem sys(build_preset("example1").config.system);
  const std::vector<double> x{4.0, 0.0};
  auto v = values(bracket_jet(br(leaf(1), leaf(2)), sys, x, 0));
  CHECK(v[0] == doctest::Approx(10.8).epsilon(1e-13));
  CHECK(v[1] == 0.0);
  CHECK_FALSE(is_structural_zero(br(leaf(1), leaf(2)), sys));
}

TEST_CASE("structural zeros") {
  ControlAffineSystem ex3(build_preset("example3").config.system);
  CHECK(is_structural_zero(br(leaf(2), leaf(2)), ex3));
  CHECK(is_structural_zero(br(leaf(2), leaf(3)), ex3));
  CHECK(is_structural_zero(br(leaf(2), leaf(4)), ex3));
  CHECK(is_structural_zero(br(leaf(3), leaf(4)), ex3));
  CHECK(zero_check(br(leaf(2), leaf(3)), ex3).provenance == ZeroProvenance::Structural);
  CHECK_FALSE(is_structural_zero(br(leaf(1), leaf(2)), ex3));
  CHECK_FALSE(is_structural_zero(br(leaf(1), br(leaf(1), leaf(2))), ex3));
}

TEST_CASE("budget of order plus depth") {
  ControlAffineSystem sys(build_preset("example1").config.system);
  const std::vector<double> x{1.0, 0.0};
  auto deep = br(br(br(leaf(1), leaf(2)), leaf(1)), leaf(2));
  CHECK(depth(deep) == 3);
  CHECK_NOTHROW(bracket_jet(deep, sys, x, 0));
  CHECK_THROWS(bracket_jet(deep, sys, x, 1));
  CHECK(to_string(deep) == "[[[b1,b2],b1],b2]");
}

TEST_CASE("enumeration counts") {
  auto count = [](const std::vector<BracketTerm>& ts, Family f) {
    return std::count_if(ts.begin(), ts.end(), [f](const BracketTerm& t) { return t.family == f; });
  };
  CHECK(enumerate_brackets(2, 1).empty());
  auto e22 = enumerate_brackets(2, 2);
  REQUIRE(e22.size() == 1);
  CHECK(to_string(e22[0].expr) == "[b1,b2]");
  auto e23 = enumerate_brackets(2, 3);
  CHECK(count(e23, Family::Nu3) == 2);
  auto e44 = enumerate_brackets(4, 4);
  CHECK(count(e44, Family::Nu2) == 6);
  CHECK(count(e44, Family::Nu3) == 24);
  CHECK(count(e44, Family::Beta1) == 30);
  CHECK(count(e44, Family::Beta2) == 96);
  for (const auto& t : e44) {
    CHECK(t.indices[0] < t.indices[1]);
    if (t.family == Family::Beta1) {
      CHECK(t.indices[2] < t.indices[3]);
      CHECK((t.indices[0] != t.indices[2] || t.indices[1] != t.indices[3]));
    }
  }
  CHECK_THROWS(enumerate_brackets(2, 5));
  CHECK_THROWS(enumerate_brackets(2, 0));
}

TEST_CASE("antisymmetry and bilinearity") {
  auto sys = random_system(11);
  const std::vector<std::pair<BracketExpr, BracketExpr>> pairs{
      {leaf(1), leaf(2)}, {leaf(0), leaf(3)}, {br(leaf(1), leaf(2)), leaf(3)}};
  for (const auto& x : random_points(5, 16, 3)) {
    for (const auto& [a, b] : pairs) {
      auto ab = values(bracket_jet(br(a, b), sys, x, 0));
      auto ba = values(bracket_jet(br(b, a), sys, x, 0));
      const double scale = std::max(1.0, norm_inf(ab));
      for (int c = 0; c < 3; ++c) CHECK(std::abs(ab[c] + ba[c]) <= 1e-10 * scale);
    }
    auto f_g = values(bracket_jet(br(leaf(1), leaf(2)), sys, x, 0));
    auto cf_g = values(bracket_jet(br(leaf(4), leaf(2)), sys, x, 0));
    const double scale = std::max(1.0, norm_inf(cf_g));
    for (int c = 0; c < 3; ++c) CHECK(std::abs(cf_g[c] - 2.5 * f_g[c]) <= 1e-10 * scale);
  }
}

TEST_CASE("Jacobi identity") {
  for (unsigned seed : {1u, 2u, 3u}) {
    auto sys = random_system(seed);
    auto f = leaf(1), g = leaf(2), h = leaf(3);
    for (const auto& x : random_points(seed + 100, 16, 3)) {
      auto t1 = values(bracket_jet(br(f, br(g, h)), sys, x, 0));
      auto t2 = values(bracket_jet(br(g, br(h, f)), sys, x, 0));
      auto t3 = values(bracket_jet(br(h, br(f, g)), sys, x, 0));
      const double scale = std::max({1.0, norm_inf(t1), norm_inf(t2), norm_inf(t3)});
      for (int c = 0; c < 3; ++c) CHECK(std::abs(t1[c] + t2[c] + t3[c]) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("bracket matches a finite-difference construction") {
  auto sys = random_system(21);
  const double h = 1e-5;
  auto jac = [&](int i, const std::vector<double>& x) {
    std::vector<std::vector<double>> J(3, std::vector<double>(3));
    for (int v = 0; v < 3; ++v) {
      auto xp = x, xm = x;
      xp[v] += h;
      xm[v] -= h;
      auto fp = sys.field(i, xp), fm = sys.field(i, xm);
      for (int c = 0; c < 3; ++c) J[c][v] = (fp[c] - fm[c]) / (2 * h);
    }
    return J;
  };
  for (const auto& x : random_points(9, 16, 3)) {
    auto f = sys.field(1, x), g = sys.field(2, x);
    auto Jf = jac(1, x), Jg = jac(2, x);
    auto jets = bracket_jet(br(leaf(1), leaf(2)), sys, x, 1);
    for (int c = 0; c < 3; ++c) {
      double want = 0.0;
      for (int v = 0; v < 3; ++v) want += Jg[c][v] * f[v] - Jf[c][v] * g[v];
      CHECK(std::abs(jets[c].value() - want) <= 1e-4 * std::max(1.0, std::abs(want)));
    }
    // first-order partials of the bracket against differences of bracket values
    for (int v = 0; v < 3; ++v) {
      auto xp = x, xm = x;
      xp[v] += h;
      xm[v] -= h;
      auto bp = values(bracket_jet(br(leaf(1), leaf(2)), sys, xp, 0));
      auto bm = values(bracket_jet(br(leaf(1), leaf(2)), sys, xm, 0));
      for (int c = 0; c < 3; ++c) {
        const double fd = (bp[c] - bm[c]) / (2 * h);
        CHECK(std::abs(jets[c].d1(v) - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("evaluator cache agrees with direct evaluation") {
  ControlAffineSystem sys(build_preset("example3").config.system);
  const std::vector<double> x{2.2, -0.4};
  BracketEvaluator ev(sys, x, 3);
  for (const auto& t : enumerate_brackets(sys.m(), 4)) {
    auto direct = values(bracket_jet(t.expr, sys, x, 0));
    CHECK(ev.value(t.expr) == direct);
  }
}

TEST_CASE("family names round-trip") {
  for (Family f : {Family::Nu2, Family::Nu3, Family::Beta1, Family::Beta2, Family::LegacyNu2, Family::LegacyNu3})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK(family_order(Family::Beta2) == 4);
  CHECK(family_order(Family::Nu2) == 2);
}
