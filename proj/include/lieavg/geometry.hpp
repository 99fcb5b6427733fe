#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lieavg/jet.hpp"
#include "lieavg/system.hpp"

namespace lieavg {

struct BracketNode;
using BracketExpr = std::shared_ptr<const BracketNode>;

/// Leaf(field index, 0 = drift) or Br(left, right).
struct BracketNode {
  int leaf = -1;
  BracketExpr left, right;
  std::string text;  // canonical form, set by leaf() and br()

  bool is_leaf() const { return leaf >= 0; }
};

BracketExpr leaf(int index);
BracketExpr br(BracketExpr a, BracketExpr b);
int depth(const BracketExpr& e);
/// Canonical text, e.g. "[b1,[b1,b2]]".
std::string to_string(const BracketExpr& e);
/// Same shape with each leaf replaced by the canonical key of its field,
/// so that brackets of identical fields compare equal.
std::string field_key(const BracketExpr& e, const ControlAffineSystem& sys);

/// Value and partials (to `order`) of the bracket field at x. Leaves are
/// evaluated at jet order order + depth(expr), which must not exceed 3.
std::vector<Jet> bracket_jet(const BracketExpr& expr, const ControlAffineSystem& sys,
                             std::span<const double> x, int order);

/// Caches leaf jets and sub-brackets for repeated evaluation at one point.
class BracketEvaluator {
 public:
  BracketEvaluator(const ControlAffineSystem& sys, std::span<const double> x, int max_leaf_order);
  const std::vector<Jet>& eval(const BracketExpr& e, int order);
  std::vector<double> value(const BracketExpr& e);

 private:
  const ControlAffineSystem& sys_;
  std::vector<double> x_;
  int max_order_;
  std::vector<std::vector<Jet>> leaves_;
  // Keys view the text of the node held alongside the result.
  std::map<std::pair<std::string_view, int>, std::pair<BracketExpr, std::vector<Jet>>> memo_;
};

enum class Family { Nu2, Nu3, Beta1, Beta2, LegacyNu2, LegacyNu3 };
const char* family_name(Family f);
Family family_from_name(const std::string& s);
int family_order(Family f);  // number of channel indices

struct BracketTerm {
  Family family;
  std::vector<int> indices;  // channel indices, 1-based, in coefficient order
  BracketExpr expr;
};

/// Brackets of L2..Lr with the index ranges of the LBS sums:
///   L2: j1<j2, [b_j1,b_j2]
///   L3: j1<j2, j3 free, [b_j3,[b_j1,b_j2]]
///   L4: j1<j2, j3<j4, (j1,j2)!=(j3,j4), [[b_j1,b_j2],[b_j3,b_j4]]
///       j1<j2, j3, j4 free, [[[b_j1,b_j2],b_j3],b_j4]
std::vector<BracketTerm> enumerate_brackets(int m, int r);

enum class ZeroProvenance { None, Structural, Numeric };

struct ZeroCheck {
  bool zero = false;
  ZeroProvenance provenance = ZeroProvenance::None;
};

/// Structural: identical operands, or both leaves constant (also through
/// nesting). Otherwise zero when all components vanish below 1e-12 at 8
/// low-discrepancy points of the probe box.
ZeroCheck zero_check(const BracketExpr& e, const ControlAffineSystem& sys);
bool is_structural_zero(const BracketExpr& e, const ControlAffineSystem& sys);

}  // namespace lieavg
