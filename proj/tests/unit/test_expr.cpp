#include <doctest.h>

#include <cmath>

#include "lieavg/errors.hpp"
#include "lieavg/expr.hpp"

using namespace lieavg;

namespace {

double value(const std::string& text, std::vector<double> x = {}, double s = 0.0,
             std::map<std::string, double> params = {}) {
  Scope sc;
  sc.n = static_cast<int>(x.size());
  sc.allow_phase = true;
  sc.params = &params;
  return compile(parse(text), sc).eval(x, s);
}

std::size_t error_offset(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("no parse error for " << text);
  return 0;
}

}  // namespace

TEST_CASE("structural rendering") {
  CHECK(to_string(parse("x1")) == "Var(x1)");
  CHECK(to_string(parse("-H*(x1-1)^4")) == "Neg(Mul(Param(H),Pow(Sub(Var(x1),1),4)))");
  CHECK(to_string(parse("sin(s)")) == "sin(Phase(s))");
  CHECK(to_string(parse("a+b*c")) == "Add(Param(a),Mul(Param(b),Param(c)))");
}

TEST_CASE("precedence and associativity") {
  CHECK(value("2+3*4") == 14.0);
  CHECK(value("8-3-2") == 3.0);
  CHECK(value("8/4/2") == 1.0);
  CHECK(value("-2^2") == -4.0);
  CHECK(value("2^3^2") == 64.0);
  CHECK(value("(1+2)*(3-5)") == -6.0);
  CHECK(value("3*-2") == -6.0);
  CHECK(value("2^-1") == 0.5);
  CHECK(value("--3") == 3.0);
  CHECK(value("1.5e1+.5") == 15.5);
}

TEST_CASE("variables, phase and parameters") {
  CHECK(value("x1*x2", {2.0, 3.0}) == 6.0);
  CHECK(value("sin(s)", {}, std::numbers::pi / 2) == doctest::Approx(1.0));
  CHECK(value("k*x1", {2.0}, 0.0, {{"k", 1.5}}) == 3.0);
  CHECK(value("exp(0)+log(1)+sqrt(4)+cos(0)+tan(0)") == 4.0);
}

TEST_CASE("syntax errors carry offsets") {
  CHECK(error_offset("sin(s") == 5);
  CHECK(error_offset("1+") == 2);
  CHECK(error_offset("x1 x2") == 3);
  CHECK(error_offset("(1+2))") == 5);
  CHECK(error_offset("2^1.5") == 2);
  CHECK(error_offset("2^x1") == 2);
  CHECK(error_offset("") == 0);
  CHECK(error_offset("1 $ 2") == 2);
  CHECK_THROWS_AS(parse("abs(x1)"), ParseError);
  CHECK_THROWS_AS(parse("sign(x1)"), ParseError);
}

TEST_CASE("binding errors") {
  std::map<std::string, double> params{{"H", 1.0}};
  Scope sc;
  sc.n = 2;
  sc.params = &params;
  CHECK_THROWS_AS(compile(parse("x3"), sc), BindError);
  CHECK_THROWS_AS(compile(parse("G*x1"), sc), BindError);
  CHECK_THROWS_AS(compile(parse("sin(s)"), sc), BindError);
  CHECK_NOTHROW(compile(parse("H*x2"), sc));
}

TEST_CASE("definitions are inlined and cycles rejected") {
  std::map<std::string, double> params{{"H", 0.5}};
  std::map<std::string, Expr> defs{{"J", parse("H*(x1-1)^2")}, {"K", parse("2*J")}};
  Scope sc;
  sc.n = 1;
  sc.params = &params;
  sc.definitions = &defs;
  const std::vector<double> x{3.0};
  CHECK(compile(parse("K+J"), sc).eval(x) == doctest::Approx(6.0));
  std::map<std::string, Expr> cyc{{"A", parse("B+1")}, {"B", parse("A+1")}};
  sc.definitions = &cyc;
  CHECK_THROWS_AS(compile(parse("A"), sc), BindError);
}

TEST_CASE("evaluation domain errors") {
  CHECK_THROWS_AS(value("log(x1)", {0.0}), DomainError);
  CHECK_THROWS_AS(value("log(x1)", {-2.0}), DomainError);
  CHECK_THROWS_AS(value("sqrt(x1)", {-1.0}), DomainError);
  CHECK_THROWS_AS(value("1/x1", {0.0}), DomainError);
  CHECK_THROWS_AS(value("x1^-1", {0.0}), DomainError);
}

TEST_CASE("helpers") {
  Expr e = parse("a*x1+b*sin(s)+a");
  CHECK(param_names(e) == std::vector<std::string>{"a", "b"});
  CHECK(depends_on_state(e));
  CHECK_FALSE(depends_on_state(parse("a*cos(s)")));
}
