#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lieavg/jet.hpp"

namespace lieavg {

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt };

const char* func_name(Func f);

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Num, Var, Phase, Param, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind;
  double num = 0.0;   // Num
  int var = -1;       // Var: zero-based state index
  int exponent = 0;   // Pow
  Func func = Func::Sin;
  std::string name;   // Var / Param spelling
  Expr a, b;          // operands
  std::size_t offset = 0;
};

/// Parses expression text. Grammar (see docs/grammar.md):
///   sum     := term { ('+' | '-') term }
///   term    := '-' term | product
///   product := power { ('*' | '/') ['-'] power }
///   power   := primary { '^' ['-'] integer }
///   primary := number | name | name '(' sum ')' | '(' sum ')'
Expr parse(const std::string& text);

/// Structural rendering, e.g. Neg(Mul(Param(H),Pow(Sub(Var(x1),1),4))).
std::string to_string(const Expr& e);

/// Parameter names referenced by e (sorted, unique).
std::vector<std::string> param_names(const Expr& e);
/// True when e references any state variable.
bool depends_on_state(const Expr& e);

/// Name resolution context for compile().
struct Scope {
  int n = 0;                                    // number of state variables x1..xn
  bool allow_phase = false;                     // whether `s` may appear
  const std::map<std::string, double>* params = nullptr;
  const std::map<std::string, Expr>* definitions = nullptr;
};

/// Flat postfix form of a bound expression. Parameters are folded to
/// constants and definitions are inlined.
class Program {
 public:
  Program() = default;

  double eval(std::span<const double> x, double s = 0.0) const;
  Jet eval_jet(std::span<const double> x, int order, double s = 0.0) const;

  bool empty() const { return code_.empty(); }
  bool uses_state() const;
  bool uses_phase() const;
  int max_var() const;

  friend Program compile(const Expr& e, const Scope& scope);

 private:
  enum class Op : unsigned char { Const, Var, Phase, Neg, Add, Sub, Mul, Div, Pow, Call };
  struct Instr {
    Op op;
    Func func = Func::Sin;
    int arg = 0;
    double value = 0.0;
  };
  std::vector<Instr> code_;
  int depth_ = 0;

  void emit(const Expr& e, const Scope& scope, int& depth, int& max_depth, int guard);
};

Program compile(const Expr& e, const Scope& scope);

/// Convenience: parse, bind against x1..xn and params, evaluate as a jet.
Jet eval_jet(const Expr& e, std::span<const double> point,
             const std::map<std::string, double>& params, int order);

}  // namespace lieavg
