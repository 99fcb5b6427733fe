#include "lieavg/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "lieavg/errors.hpp"

namespace lieavg {

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

namespace {

using Kind = ExprNode::Kind;

Expr make(Kind k, std::size_t off, Expr a = nullptr, Expr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->offset = off;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool lookup_func(const std::string& name, Func& f) {
  static const std::pair<const char*, Func> table[] = {
      {"sin", Func::Sin}, {"cos", Func::Cos}, {"tan", Func::Tan},
      {"exp", Func::Exp}, {"log", Func::Log}, {"sqrt", Func::Sqrt}};
  for (auto& [n, fn] : table)
    if (name == n) {
      f = fn;
      return true;
    }
  return false;
}

bool is_state_name(const std::string& s) {
  if (s.size() < 2 || s[0] != 'x' || s[1] < '1' || s[1] > '9') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Parser {
 public:
  explicit Parser(const std::string& t) : t_(t) {}

  Expr run() {
    skip();
    if (pos_ >= t_.size()) throw ParseError("empty expression", pos_);
    Expr e = sum();
    skip();
    if (pos_ < t_.size()) throw ParseError(std::string("unexpected '") + t_[pos_] + "'", pos_);
    return e;
  }

 private:
  const std::string& t_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < t_.size() && t_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= t_.size()) throw ParseError(std::string("expected '") + c + "' before end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr sum() {
    Expr e = term();
    for (;;) {
      skip();
      std::size_t off = pos_;
      if (accept('+')) e = make(Kind::Add, off, e, term());
      else if (accept('-')) e = make(Kind::Sub, off, e, term());
      else return e;
    }
  }

  Expr term() {
    skip();
    std::size_t off = pos_;
    if (accept('-')) return make(Kind::Neg, off, term());
    return product();
  }

  Expr signed_power() {
    skip();
    std::size_t off = pos_;
    if (accept('-')) return make(Kind::Neg, off, signed_power());
    return power();
  }

  Expr product() {
    Expr e = power();
    for (;;) {
      skip();
      std::size_t off = pos_;
      if (accept('*')) e = make(Kind::Mul, off, e, signed_power());
      else if (accept('/')) e = make(Kind::Div, off, e, signed_power());
      else return e;
    }
  }

  int integer_exponent() {
    skip();
    bool paren = accept('(');
    skip();
    bool neg = accept('-');
    skip();
    std::size_t start = pos_;
    while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("exponent must be an integer literal", start);
    if (pos_ < t_.size() && (t_[pos_] == '.' || t_[pos_] == 'e' || t_[pos_] == 'E'))
      throw ParseError("exponent must be an integer literal", start);
    long v = std::strtol(t_.substr(start, pos_ - start).c_str(), nullptr, 10);
    if (v > 64) throw ParseError("exponent too large", start);
    if (paren) expect(')');
    return static_cast<int>(neg ? -v : v);
  }

  Expr power() {
    Expr e = primary();
    for (;;) {
      skip();
      std::size_t off = pos_;
      if (!accept('^')) return e;
      Expr p = make(Kind::Pow, off, e);
      const_cast<ExprNode&>(*p).exponent = integer_exponent();
      e = p;
    }
  }

  Expr primary() {
    skip();
    std::size_t off = pos_;
    if (pos_ >= t_.size()) throw ParseError("unexpected end of input", pos_);
    char c = t_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[pos_])) || t_[pos_] == '_')) ++pos_;
      std::string name = t_.substr(start, pos_ - start);
      skip();
      if (pos_ < t_.size() && t_[pos_] == '(') {
        Func f;
        if (!lookup_func(name, f)) throw ParseError("unknown function '" + name + "'", start);
        ++pos_;
        Expr arg = sum();
        expect(')');
        auto n = std::const_pointer_cast<ExprNode>(make(Kind::Call, start, arg));
        n->func = f;
        n->name = name;
        return n;
      }
      auto n = std::const_pointer_cast<ExprNode>(make(Kind::Param, start));
      n->name = name;
      if (name == "s") {
        n->kind = Kind::Phase;
      } else if (is_state_name(name)) {
        n->kind = Kind::Var;
        n->var = std::atoi(name.c_str() + 1) - 1;
      }
      return n;
    }
    throw ParseError(std::string("unexpected '") + c + "'", off);
  }

  Expr number() {
    std::size_t start = pos_;
    const char* begin = t_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", start);
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::const_pointer_cast<ExprNode>(make(Kind::Num, start));
    n->num = v;
    return n;
  }
};

void render(const Expr& e, std::ostringstream& os) {
  switch (e->kind) {
    case Kind::Num: {
      std::ostringstream v;
      v.precision(17);
      v << e->num;
      os << v.str();
      return;
    }
    case Kind::Var: os << "Var(" << e->name << ")"; return;
    case Kind::Phase: os << "Phase(s)"; return;
    case Kind::Param: os << "Param(" << e->name << ")"; return;
    case Kind::Neg: os << "Neg("; render(e->a, os); os << ")"; return;
    case Kind::Pow: os << "Pow("; render(e->a, os); os << "," << e->exponent << ")"; return;
    case Kind::Call: os << func_name(e->func) << "("; render(e->a, os); os << ")"; return;
    default: break;
  }
  const char* tag = e->kind == Kind::Add ? "Add" : e->kind == Kind::Sub ? "Sub" : e->kind == Kind::Mul ? "Mul" : "Div";
  os << tag << "(";
  render(e->a, os);
  os << ",";
  render(e->b, os);
  os << ")";
}

void collect_params(const Expr& e, std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == Kind::Param) out.insert(e->name);
  collect_params(e->a, out);
  collect_params(e->b, out);
}

double pow_scalar(double b, int e) {
  if (e == 0) return 1.0;
  double r = b;
  for (int k = 1; k < std::abs(e); ++k) r = r * b;
  if (e < 0) {
    if (r == 0.0) throw DomainError("division by zero");
    r = 1.0 / r;
  }
  return r;
}

double call_scalar(Func f, double v) {
  switch (f) {
    case Func::Sin: return std::sin(v);
    case Func::Cos: return std::cos(v);
    case Func::Tan: return std::tan(v);
    case Func::Exp: return std::exp(v);
    case Func::Log:
      if (!(v > 0.0)) throw DomainError("log of non-positive value");
      return std::log(v);
    case Func::Sqrt:
      if (v < 0.0) throw DomainError("sqrt of negative value");
      return std::sqrt(v);
  }
  return 0.0;
}

Jet call_jet(Func f, const Jet& v) {
  switch (f) {
    case Func::Sin: return sin(v);
    case Func::Cos: return cos(v);
    case Func::Tan: return tan(v);
    case Func::Exp: return exp(v);
    case Func::Log: return log(v);
    case Func::Sqrt: return sqrt(v);
  }
  return v;
}

}  // namespace

Expr parse(const std::string& text) {
  if (text.empty()) throw ParseError("empty expression", 0);
  return Parser(text).run();
}

std::string to_string(const Expr& e) {
  std::ostringstream os;
  render(e, os);
  return os.str();
}

std::vector<std::string> param_names(const Expr& e) {
  std::set<std::string> s;
  collect_params(e, s);
  return {s.begin(), s.end()};
}

bool depends_on_state(const Expr& e) {
  if (!e) return false;
  if (e->kind == Kind::Var) return true;
  return depends_on_state(e->a) || depends_on_state(e->b);
}

void Program::emit(const Expr& e, const Scope& scope, int& depth, int& max_depth, int guard) {
  if (guard > 64) throw BindError("definition nesting too deep (cycle?)");
  auto push = [&](Instr in) {
    code_.push_back(in);
    max_depth = std::max(max_depth, depth);
  };
  switch (e->kind) {
    case Kind::Num:
      ++depth;
      push({Op::Const, Func::Sin, 0, e->num});
      return;
    case Kind::Var:
      if (e->var >= scope.n) throw BindError("unknown state variable '" + e->name + "'");
      ++depth;
      push({Op::Var, Func::Sin, e->var, 0.0});
      return;
    case Kind::Phase:
      if (!scope.allow_phase) throw BindError("phase variable 's' is not allowed here");
      ++depth;
      push({Op::Phase, Func::Sin, 0, 0.0});
      return;
    case Kind::Param: {
      if (scope.params) {
        auto it = scope.params->find(e->name);
        if (it != scope.params->end()) {
          ++depth;
          push({Op::Const, Func::Sin, 0, it->second});
          return;
        }
      }
      if (scope.definitions) {
        auto it = scope.definitions->find(e->name);
        if (it != scope.definitions->end()) {
          emit(it->second, scope, depth, max_depth, guard + 1);
          return;
        }
      }
      throw BindError("unknown identifier '" + e->name + "'");
    }
    case Kind::Neg:
      emit(e->a, scope, depth, max_depth, guard);
      push({Op::Neg});
      return;
    case Kind::Pow:
      emit(e->a, scope, depth, max_depth, guard);
      push({Op::Pow, Func::Sin, e->exponent, 0.0});
      return;
    case Kind::Call:
      emit(e->a, scope, depth, max_depth, guard);
      push({Op::Call, e->func, 0, 0.0});
      return;
    default: break;
  }
  emit(e->a, scope, depth, max_depth, guard);
  emit(e->b, scope, depth, max_depth, guard);
  --depth;
  Op op = e->kind == Kind::Add ? Op::Add : e->kind == Kind::Sub ? Op::Sub : e->kind == Kind::Mul ? Op::Mul : Op::Div;
  push({op});
}

Program compile(const Expr& e, const Scope& scope) {
  Program p;
  int depth = 0, max_depth = 0;
  p.emit(e, scope, depth, max_depth, 0);
  p.depth_ = max_depth;
  return p;
}

bool Program::uses_state() const {
  return std::any_of(code_.begin(), code_.end(), [](const Instr& i) { return i.op == Op::Var; });
}

bool Program::uses_phase() const {
  return std::any_of(code_.begin(), code_.end(), [](const Instr& i) { return i.op == Op::Phase; });
}

int Program::max_var() const {
  int m = -1;
  for (const auto& i : code_)
    if (i.op == Op::Var) m = std::max(m, i.arg);
  return m;
}

double Program::eval(std::span<const double> x, double s) const {
  constexpr int kInline = 64;
  std::array<double, kInline> small{};
  std::vector<double> big;
  double* st = small.data();
  if (depth_ > kInline) {
    big.resize(depth_);
    st = big.data();
  }
  int sp = 0;
  for (const auto& in : code_) {
    switch (in.op) {
      case Op::Const: st[sp++] = in.value; break;
      case Op::Var: st[sp++] = x[in.arg]; break;
      case Op::Phase: st[sp++] = s; break;
      case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
      case Op::Add: --sp; st[sp - 1] = st[sp - 1] + st[sp]; break;
      case Op::Sub: --sp; st[sp - 1] = st[sp - 1] - st[sp]; break;
      case Op::Mul: --sp; st[sp - 1] = st[sp - 1] * st[sp]; break;
      case Op::Div:
        --sp;
        if (st[sp] == 0.0) throw DomainError("division by zero");
        st[sp - 1] = st[sp - 1] / st[sp];
        break;
      case Op::Pow: st[sp - 1] = pow_scalar(st[sp - 1], in.arg); break;
      case Op::Call: st[sp - 1] = call_scalar(in.func, st[sp - 1]); break;
    }
  }
  return st[0];
}

Jet Program::eval_jet(std::span<const double> x, int order, double s) const {
  const int n = static_cast<int>(x.size());
  std::vector<Jet> st;
  st.reserve(depth_);
  for (const auto& in : code_) {
    switch (in.op) {
      case Op::Const: st.push_back(Jet::constant(n, order, in.value)); break;
      case Op::Var: st.push_back(Jet::variable(n, order, in.arg, x[in.arg])); break;
      case Op::Phase: st.push_back(Jet::constant(n, order, s)); break;
      case Op::Neg: st.back() = -st.back(); break;
      case Op::Add: {
        Jet r = std::move(st.back());
        st.pop_back();
        st.back() += r;
        break;
      }
      case Op::Sub: {
        Jet r = std::move(st.back());
        st.pop_back();
        st.back() -= r;
        break;
      }
      case Op::Mul: {
        Jet r = std::move(st.back());
        st.pop_back();
        st.back() = st.back() * r;
        break;
      }
      case Op::Div: {
        Jet r = std::move(st.back());
        st.pop_back();
        st.back() = st.back() / r;
        break;
      }
      case Op::Pow: st.back() = pow_int(st.back(), in.arg); break;
      case Op::Call: st.back() = call_jet(in.func, st.back()); break;
    }
  }
  return std::move(st.back());
}

Jet eval_jet(const Expr& e, std::span<const double> point, const std::map<std::string, double>& params, int order) {
  if (order < 0 || order > kMaxJetOrder) throw ConfigError("jet order must be in 0..3");
  Scope sc;
  sc.n = static_cast<int>(point.size());
  sc.params = &params;
  return compile(e, sc).eval_jet(point, order);
}

}  // namespace lieavg
