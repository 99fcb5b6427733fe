#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "lieavg/errors.hpp"
#include "lieavg/expr.hpp"
#include "lieavg/jet.hpp"

using namespace lieavg;

namespace {

// Polynomial with explicit monomials for symbolic differentiation.
struct Poly {
  struct Term {
    double c;
    std::array<int, 4> e;
  };
  int n;
  std::vector<Term> terms;

  std::string text() const {
    std::ostringstream ss;
    ss.precision(17);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      ss << (t ? "+" : "") << "(" << terms[t].c << ")";
      for (int v = 0; v < n; ++v)
        if (terms[t].e[v] > 0) ss << "*x" << v + 1 << "^" << terms[t].e[v];
    }
    return ss.str();
  }

  // d^a p at x
  double partial(const std::array<int, 4>& a, const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& t : terms) {
      double v = t.c;
      for (int k = 0; k < n; ++k) {
        if (a[k] > t.e[k]) {
          v = 0.0;
          break;
        }
        for (int j = 0; j < a[k]; ++j) v *= t.e[k] - j;
        v *= std::pow(x[k], t.e[k] - a[k]);
      }
      s += v;
    }
    return s;
  }
};

Poly random_poly(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> nterms(1, 6);
  Poly p{n, {}};
  const int k = nterms(rng);
  for (int t = 0; t < k; ++t) {
    Poly::Term term{coef(rng), {0, 0, 0, 0}};
    int budget = std::uniform_int_distribution<int>(0, 4)(rng);
    while (budget-- > 0) term.e[std::uniform_int_distribution<int>(0, n - 1)(rng)] += 1;
    p.terms.push_back(term);
  }
  return p;
}

}  // namespace

TEST_CASE("layout sizes and prefix property") {
  CHECK(JetLayout::get(1, 3).size() == 4);
  CHECK(JetLayout::get(2, 2).size() == 6);
  CHECK(JetLayout::get(4, 3).size() == 35);
  CHECK(JetLayout::get(8, 3).size() == 165);
  const auto& lo = JetLayout::get(3, 2);
  const auto& hi = JetLayout::get(3, 3);
  for (std::size_t s = 0; s < lo.size(); ++s) CHECK(lo.index[s] == hi.index[s]);
  CHECK_THROWS_AS(JetLayout::get(9, 1), ConfigError);
  CHECK_THROWS_AS(JetLayout::get(2, 4), ConfigError);
}

TEST_CASE("x1^2 at 3") {
  const std::vector<double> x{3.0};
  Jet j = eval_jet(parse("x1^2"), x, {}, 2);
  CHECK(j.value() == doctest::Approx(9.0));
  CHECK(j.partial({1}) == doctest::Approx(6.0));
  CHECK(j.partial({2}) == doctest::Approx(2.0));
}

TEST_CASE("quartic cost value and slope") {
  const std::vector<double> x{4.0};
  Jet j = eval_jet(parse("-H*(x1-1)^4"), x, {{"H", 0.1}}, 1);
  CHECK(j.value() == doctest::Approx(-8.1).epsilon(1e-14));
  CHECK(j.d1(0) == doctest::Approx(-10.8).epsilon(1e-14));
}

TEST_CASE("random polynomial jets match symbolic derivatives") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> pt(-1.5, 1.5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 4;
    Poly p = random_poly(rng, n);
    std::vector<double> x(n);
    for (auto& v : x) v = pt(rng);
    Jet j = eval_jet(parse(p.text()), x, {}, 3);
    const auto& L = j.layout();
    for (std::size_t s = 0; s < L.size(); ++s) {
      std::array<int, 4> a{0, 0, 0, 0};
      for (int v = 0; v < n; ++v) a[v] = L.index[s][v];
      const double want = p.partial(a, x);
      const double got = j.partial(L.index[s]);
      CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("truncation is bit-identical to a lower-order evaluation") {
  const std::vector<double> x{0.3, -0.7, 1.1};
  const char* exprs[] = {"sin(x1*x2)+exp(x3)/(1+x1^2)", "log(2+x1^2)*cos(x2-x3)", "sqrt(3+x1*x2*x3)*tan(x1/4)",
                         "(x1-x2)^3/(x3+4)"};
  for (const char* e : exprs) {
    Expr ex = parse(e);
    for (int d = 1; d <= 3; ++d) {
      Jet hi = eval_jet(ex, x, {}, d);
      Jet lo = eval_jet(ex, x, {}, d - 1);
      Jet tr = hi.truncated(d - 1);
      REQUIRE(tr.size() == lo.size());
      for (std::size_t s = 0; s < lo.size(); ++s) CHECK(tr.coeff(s) == lo.coeff(s));
    }
  }
}

TEST_CASE("order-0 jet equals scalar evaluation") {
  std::map<std::string, double> params;
  Scope sc;
  sc.n = 2;
  sc.params = &params;
  Program prog = compile(parse("exp(x1)*sin(x2)-x1^3/(1+x2^2)"), sc);
  const std::vector<double> x{0.4, 1.3};
  CHECK(prog.eval_jet(x, 0).value() == prog.eval(x));
}

TEST_CASE("chain rule for sin(g) against finite differences") {
  Expr e = parse("sin(x1^2*x2+exp(x2))");
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pt(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x{pt(rng), pt(rng)};
    Jet j = eval_jet(e, x, {}, 1);
    for (int v = 0; v < 2; ++v) {
      auto xp = x, xm = x;
      xp[v] += 1e-6;
      xm[v] -= 1e-6;
      const double fd = (eval_jet(e, xp, {}, 0).value() - eval_jet(e, xm, {}, 0).value()) / 2e-6;
      CHECK(std::abs(j.d1(v) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("elementary functions give exact higher derivatives") {
  const std::vector<double> x{0.7};
  Jet e = eval_jet(parse("exp(2*x1)"), x, {}, 3);
  CHECK(e.partial({3}) == doctest::Approx(8.0 * std::exp(1.4)).epsilon(1e-13));
  Jet l = eval_jet(parse("log(x1)"), x, {}, 3);
  CHECK(l.partial({3}) == doctest::Approx(2.0 / (0.7 * 0.7 * 0.7)).epsilon(1e-13));
  Jet s = eval_jet(parse("sqrt(x1)"), x, {}, 2);
  CHECK(s.partial({2}) == doctest::Approx(-0.25 * std::pow(0.7, -1.5)).epsilon(1e-13));
  Jet t = eval_jet(parse("tan(x1)"), x, {}, 1);
  CHECK(t.d1(0) == doctest::Approx(1.0 / (std::cos(0.7) * std::cos(0.7))).epsilon(1e-13));
  Jet q = eval_jet(parse("1/x1"), x, {}, 2);
  CHECK(q.partial({2}) == doctest::Approx(2.0 / (0.7 * 0.7 * 0.7)).epsilon(1e-13));
  Jet c = eval_jet(parse("cos(x1)"), x, {}, 3);
  CHECK(c.partial({3}) == doctest::Approx(std::sin(0.7)).epsilon(1e-13));
}

TEST_CASE("negative integer powers") {
  const std::vector<double> x{2.0};
  Jet j = eval_jet(parse("x1^-2"), x, {}, 1);
  CHECK(j.value() == doctest::Approx(0.25));
  CHECK(j.d1(0) == doctest::Approx(-0.25));
}

TEST_CASE("domain errors") {
  const std::vector<double> zero{0.0}, neg{-1.0};
  CHECK_THROWS_AS(eval_jet(parse("log(x1)"), zero, {}, 0), DomainError);
  CHECK_THROWS_AS(eval_jet(parse("sqrt(x1)"), neg, {}, 0), DomainError);
  CHECK_THROWS_AS(eval_jet(parse("1/x1"), zero, {}, 1), DomainError);
  CHECK_THROWS_AS(eval_jet(parse("sqrt(x1)"), zero, {}, 1), DomainError);
  CHECK(eval_jet(parse("sqrt(x1)"), zero, {}, 0).value() == 0.0);
}

TEST_CASE("jet arithmetic identities") {
  const std::vector<double> x{0.5, -0.25};
  Expr a = parse("x1*x2+sin(x1)");
  Expr b = parse("exp(x2)+x1^2");
  Jet ja = eval_jet(a, x, {}, 3), jb = eval_jet(b, x, {}, 3);
  Jet q = (ja * jb) / jb;
  for (std::size_t s = 0; s < q.size(); ++s) CHECK(q.coeff(s) == doctest::Approx(ja.coeff(s)).epsilon(1e-13));
  Jet z = ja - ja;
  CHECK(z.is_zero());
  Jet acc(2, 3);
  acc.add_product(ja, jb);
  Jet prod = ja * jb;
  for (std::size_t s = 0; s < acc.size(); ++s) CHECK(acc.coeff(s) == prod.coeff(s));
  Jet d = ja.derivative(0);
  CHECK(d.order() == 2);
  CHECK(d.value() == doctest::Approx(ja.d1(0)));
}
