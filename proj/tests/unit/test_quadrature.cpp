#include <doctest.h>

#include <cmath>
#include <vector>

#include "lieavg/quadrature.hpp"

using namespace lieavg;

namespace {

std::vector<double> sample(double (*f)(double), double a, double h, int N) {
  std::vector<double> v(N + 1);
  for (int i = 0; i <= N; ++i) v[i] = f(a + i * h);
  return v;
}

}  // namespace

TEST_CASE("exact for polynomials up to degree 5") {
  const int N = 17;
  const double a = -0.4, h = 0.13;
  for (int deg = 0; deg <= 5; ++deg) {
    std::vector<double> f(N + 1);
    for (int i = 0; i <= N; ++i) f[i] = std::pow(a + i * h, deg);
    auto F = cumulative_integral(f, h);
    REQUIRE(F.size() == f.size());
    CHECK(F[0] == 0.0);
    for (int i = 1; i <= N; ++i) {
      const double x = a + i * h;
      const double want = (std::pow(x, deg + 1) - std::pow(a, deg + 1)) / (deg + 1);
      CHECK(F[i] == doctest::Approx(want).epsilon(1e-12).scale(1.0));
    }
    CHECK(integral(f, h) == doctest::Approx(F[N]).epsilon(1e-14));
  }
}

TEST_CASE("sixth-order convergence on sin") {
  auto err = [](int N) {
    const double h = 3.0 / N;
    auto F = cumulative_integral(sample([](double x) { return std::sin(x); }, 0.0, h, N), h);
    double e = 0.0;
    for (int i = 0; i <= N; ++i) e = std::max(e, std::abs(F[i] - (1.0 - std::cos(i * h))));
    return e;
  };
  const double e1 = err(20), e2 = err(40);
  CHECK(e1 / e2 > 40.0);
}

TEST_CASE("full period of a zero-mean waveform integrates to zero") {
  const int N = 512;
  const double h = 2 * std::numbers::pi / N;
  auto f = sample([](double x) { return std::cos(x) + 0.3 * std::sin(3 * x); }, 0.0, h, N);
  CHECK(std::abs(integral(f, h)) < 1e-14);
}

TEST_CASE("span overload matches the vector overload") {
  const int N = 9;
  const double h = 0.5;
  auto f = sample([](double x) { return std::exp(x); }, 0.0, h, N);
  std::vector<double> out(N + 1);
  cumulative_integral(f, h, out);
  CHECK(out == cumulative_integral(f, h));
}

TEST_CASE("too few intervals are rejected") {
  std::vector<double> f(4, 1.0);
  CHECK_THROWS(cumulative_integral(f, 0.1));
}
