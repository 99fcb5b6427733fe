#pragma once

#include <array>
#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace lieavg {

constexpr int kMaxJetVars = 8;
constexpr int kMaxJetOrder = 3;

using MultiIndex = std::array<std::uint8_t, kMaxJetVars>;

/// Index bookkeeping for jets in n variables truncated at total order d.
/// Multi-indices are stored in graded-lexicographic order, so the layout
/// for order d-1 is a prefix of the layout for order d.
struct JetLayout {
  int n = 0;
  int d = 0;
  std::vector<MultiIndex> index;
  std::vector<int> degree;
  // For every coefficient slot, the (a, b) slot pairs with index[a] + index[b] == index[slot].
  std::vector<std::vector<std::pair<int, int>>> conv;
  // shift[v][slot] is the slot of index[slot] + e_v, or -1 when it exceeds order d.
  std::vector<std::vector<int>> shift;

  std::size_t size() const { return index.size(); }
  int find(const MultiIndex& a) const;

  static const JetLayout& get(int n, int d);
};

/// Coefficient storage with inline capacity for the common small layouts.
class CoeffBuf {
 public:
  static constexpr std::size_t kInline = 35;  // n = 4, d = 3

  CoeffBuf() = default;
  CoeffBuf(std::size_t n, double v) { init(n, v); }
  CoeffBuf(const CoeffBuf& o) { copy_from(o); }
  CoeffBuf& operator=(const CoeffBuf& o) {
    if (this != &o) copy_from(o);
    return *this;
  }
  CoeffBuf(CoeffBuf&& o) noexcept { move_from(std::move(o)); }
  CoeffBuf& operator=(CoeffBuf&& o) noexcept {
    if (this != &o) move_from(std::move(o));
    return *this;
  }

  std::size_t size() const { return n_; }
  double* data() { return p_; }
  const double* data() const { return p_; }
  double& operator[](std::size_t i) { return p_[i]; }
  double operator[](std::size_t i) const { return p_[i]; }
  double* begin() { return p_; }
  double* end() { return p_ + n_; }
  const double* begin() const { return p_; }
  const double* end() const { return p_ + n_; }

 private:
  std::size_t n_ = 0;
  double* p_ = inline_.data();
  std::array<double, kInline> inline_;
  std::unique_ptr<double[]> heap_;

  void alloc(std::size_t n) {
    n_ = n;
    if (n <= kInline) {
      heap_.reset();
      p_ = inline_.data();
    } else {
      heap_ = std::make_unique<double[]>(n);
      p_ = heap_.get();
    }
  }
  void init(std::size_t n, double v) {
    alloc(n);
    std::fill(p_, p_ + n, v);
  }
  void copy_from(const CoeffBuf& o) {
    alloc(o.n_);
    std::copy(o.p_, o.p_ + o.n_, p_);
  }
  void move_from(CoeffBuf&& o) {
    if (o.heap_) {
      heap_ = std::move(o.heap_);
      p_ = heap_.get();
      n_ = o.n_;
      o.p_ = o.inline_.data();
      o.n_ = 0;
    } else {
      copy_from(o);
    }
  }
};

/// Truncated multivariate Taylor polynomial. Coefficient c_a multiplies
/// (x - x0)^a, so the partial derivative d^a f equals c_a * a!.
class Jet {
 public:
  Jet() = default;
  Jet(int n, int d);
  static Jet constant(int n, int d, double value);
  static Jet variable(int n, int d, int var, double value);

  int vars() const { return layout_->n; }
  int order() const { return layout_->d; }
  const JetLayout& layout() const { return *layout_; }
  std::size_t size() const { return c_.size(); }

  double value() const { return c_[0]; }
  double coeff(std::size_t slot) const { return c_[slot]; }
  double& coeff(std::size_t slot) { return c_[slot]; }
  std::span<const double> coeffs() const { return {c_.data(), c_.size()}; }

  /// Partial derivative for the given multi-index (c_a * a!).
  double partial(const MultiIndex& a) const;
  double partial(std::initializer_list<int> powers) const;
  /// First-order partial d/dx_var.
  double d1(int var) const;

  Jet truncated(int d) const;
  /// d/dx_var as a jet of order d-1.
  Jet derivative(int var) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator+=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator-(Jet a);

  /// Adds a * b into this jet (fused accumulate).
  void add_product(const Jet& a, const Jet& b);
  /// Adds sign * (d a / d x_var) * b. a has order one above this jet; b may
  /// have any order not below this jet.
  void add_dproduct(const Jet& a, int var, const Jet& b, double sign);

  /// f(g) given f(g0), f'(g0), ... up to the jet order.
  Jet compose(const double* derivs) const;

  bool is_zero(double tol = 0.0) const;

 private:
  const JetLayout* layout_ = nullptr;
  CoeffBuf c_;
};

Jet pow_int(const Jet& base, int exponent);
Jet sin(const Jet& g);
Jet cos(const Jet& g);
Jet tan(const Jet& g);
Jet exp(const Jet& g);
Jet log(const Jet& g);
Jet sqrt(const Jet& g);

}  // namespace lieavg
