#include "lieavg/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "lieavg/errors.hpp"

namespace lieavg {

BracketExpr leaf(int index) {
  auto n = std::make_shared<BracketNode>();
  n->leaf = index;
  n->text = "b" + std::to_string(index);
  return n;
}

BracketExpr br(BracketExpr a, BracketExpr b) {
  auto n = std::make_shared<BracketNode>();
  n->text = "[" + a->text + "," + b->text + "]";
  n->left = std::move(a);
  n->right = std::move(b);
  return n;
}

int depth(const BracketExpr& e) {
  if (e->is_leaf()) return 0;
  return 1 + std::max(depth(e->left), depth(e->right));
}

std::string to_string(const BracketExpr& e) { return e->text; }

std::string field_key(const BracketExpr& e, const ControlAffineSystem& sys) {
  if (e->is_leaf()) return "{" + sys.field_key(e->leaf) + "}";
  return "[" + field_key(e->left, sys) + "," + field_key(e->right, sys) + "]";
}

namespace {

// [A,B] = dB*A - dA*B, with A and B given one order higher than the result.
std::vector<Jet> combine(const std::vector<Jet>& A, const std::vector<Jet>& B, int order) {
  const int n = static_cast<int>(A.size());
  std::vector<Jet> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    Jet acc(n, order);
    for (int j = 0; j < n; ++j) {
      acc.add_dproduct(B[k], j, A[j], 1.0);
      acc.add_dproduct(A[k], j, B[j], -1.0);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<Jet> bracket_rec(const BracketExpr& e, const ControlAffineSystem& sys, std::span<const double> x,
                             int order) {
  if (e->is_leaf()) return sys.field_jet(e->leaf, x, order);
  auto A = bracket_rec(e->left, sys, x, order + 1);
  auto B = bracket_rec(e->right, sys, x, order + 1);
  return combine(A, B, order);
}

void check_leaves(const BracketExpr& e, int m) {
  if (e->is_leaf()) {
    if (e->leaf < 0 || e->leaf > m) throw ConfigError("bracket leaf index out of range: " + std::to_string(e->leaf));
    return;
  }
  check_leaves(e->left, m);
  check_leaves(e->right, m);
}

}  // namespace

std::vector<Jet> bracket_jet(const BracketExpr& expr, const ControlAffineSystem& sys, std::span<const double> x,
                             int order) {
  if (order < 0 || order + depth(expr) > kMaxJetOrder)
    throw ConfigError("bracket order budget exceeded: order " + std::to_string(order) + " + depth " +
                      std::to_string(depth(expr)) + " > 3");
  check_leaves(expr, sys.m());
  return bracket_rec(expr, sys, x, order);
}

BracketEvaluator::BracketEvaluator(const ControlAffineSystem& sys, std::span<const double> x, int max_leaf_order)
    : sys_(sys), x_(x.begin(), x.end()), max_order_(max_leaf_order) {
  if (max_leaf_order < 0 || max_leaf_order > kMaxJetOrder) throw ConfigError("leaf order must be in 0..3");
  leaves_.resize(sys.m() + 1);
}

const std::vector<Jet>& BracketEvaluator::eval(const BracketExpr& e, int order) {
  auto key = std::make_pair(std::string_view(e->text), order);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second.second;
  std::vector<Jet> r;
  if (e->is_leaf()) {
    if (order > max_order_) throw ConfigError("bracket order budget exceeded");
    auto& L = leaves_.at(e->leaf);
    if (L.empty()) L = sys_.field_jet(e->leaf, x_, max_order_);
    for (const auto& j : L) r.push_back(j.truncated(order));
  } else {
    const auto& A = eval(e->left, order + 1);
    const auto& B = eval(e->right, order + 1);
    r = combine(A, B, order);
  }
  return memo_.emplace(key, std::make_pair(e, std::move(r))).first->second.second;
}

std::vector<double> BracketEvaluator::value(const BracketExpr& e) {
  const auto& j = eval(e, 0);
  std::vector<double> v;
  for (const auto& c : j) v.push_back(c.value());
  return v;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Nu2: return "nu2";
    case Family::Nu3: return "nu3";
    case Family::Beta1: return "beta1";
    case Family::Beta2: return "beta2";
    case Family::LegacyNu2: return "legacy_nu2";
    case Family::LegacyNu3: return "legacy_nu3";
  }
  return "?";
}

Family family_from_name(const std::string& s) {
  if (s == "nu2") return Family::Nu2;
  if (s == "nu3") return Family::Nu3;
  if (s == "beta1") return Family::Beta1;
  if (s == "beta2") return Family::Beta2;
  if (s == "legacy_nu2") return Family::LegacyNu2;
  if (s == "legacy_nu3") return Family::LegacyNu3;
  throw ConfigError("unknown coefficient family '" + s + "'");
}

int family_order(Family f) {
  switch (f) {
    case Family::Nu2:
    case Family::LegacyNu2: return 2;
    case Family::Nu3:
    case Family::LegacyNu3: return 3;
    default: return 4;
  }
}

std::vector<BracketTerm> enumerate_brackets(int m, int r) {
  if (r < 1 || r > 4) throw ConfigError("truncation order r must be in 1..4");
  if (m < 1) throw ConfigError("channel count must be positive");
  std::vector<BracketTerm> out;
  auto b = [](int i) { return leaf(i); };
  if (r >= 2)
    for (int j1 = 1; j1 <= m; ++j1)
      for (int j2 = j1 + 1; j2 <= m; ++j2) out.push_back({Family::Nu2, {j1, j2}, br(b(j1), b(j2))});
  if (r >= 3)
    for (int j1 = 1; j1 <= m; ++j1)
      for (int j2 = j1 + 1; j2 <= m; ++j2)
        for (int j3 = 1; j3 <= m; ++j3)
          out.push_back({Family::Nu3, {j1, j2, j3}, br(b(j3), br(b(j1), b(j2)))});
  if (r >= 4) {
    for (int j1 = 1; j1 <= m; ++j1)
      for (int j2 = j1 + 1; j2 <= m; ++j2)
        for (int j3 = 1; j3 <= m; ++j3)
          for (int j4 = j3 + 1; j4 <= m; ++j4) {
            if (j1 == j3 && j2 == j4) continue;
            out.push_back({Family::Beta1, {j1, j2, j3, j4}, br(br(b(j1), b(j2)), br(b(j3), b(j4)))});
          }
    for (int j1 = 1; j1 <= m; ++j1)
      for (int j2 = j1 + 1; j2 <= m; ++j2)
        for (int j3 = 1; j3 <= m; ++j3)
          for (int j4 = 1; j4 <= m; ++j4)
            out.push_back({Family::Beta2, {j1, j2, j3, j4}, br(br(br(b(j1), b(j2)), b(j3)), b(j4))});
  }
  return out;
}

namespace {

bool structural_zero(const BracketExpr& e, const ControlAffineSystem& sys) {
  if (e->is_leaf()) return false;
  if (structural_zero(e->left, sys) || structural_zero(e->right, sys)) return true;
  if (field_key(e->left, sys) == field_key(e->right, sys)) return true;
  if (e->left->is_leaf() && e->right->is_leaf() && sys.field_is_constant(e->left->leaf) &&
      sys.field_is_constant(e->right->leaf))
    return true;
  return false;
}

}  // namespace

ZeroCheck zero_check(const BracketExpr& e, const ControlAffineSystem& sys) {
  if (e->is_leaf()) return {};
  if (structural_zero(e, sys)) return {true, ZeroProvenance::Structural};
  try {
    for (const auto& x : sys.probe_points(8)) {
      for (const auto& j : bracket_jet(e, sys, x, 0))
        if (!(std::abs(j.value()) < 1e-12)) return {};
    }
  } catch (const std::exception&) {
    return {};
  }
  return {true, ZeroProvenance::Numeric};
}

bool is_structural_zero(const BracketExpr& e, const ControlAffineSystem& sys) { return zero_check(e, sys).zero; }

}  // namespace lieavg
