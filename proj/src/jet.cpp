#include "lieavg/jet.hpp"

#include <algorithm>

#include <cmath>
#include <memory>

#include "lieavg/errors.hpp"

namespace lieavg {

namespace {

// Exponent tuples of total degree k in n variables, lexicographically descending.
void compositions(int n, int k, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[pos] = static_cast<std::uint8_t>(k);
    out.push_back(cur);
    cur[pos] = 0;
    return;
  }
  for (int e = k; e >= 0; --e) {
    cur[pos] = static_cast<std::uint8_t>(e);
    compositions(n, k - e, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

JetLayout build_layout(int n, int d) {
  JetLayout L;
  L.n = n;
  L.d = d;
  for (int k = 0; k <= d; ++k) {
    MultiIndex cur{};
    if (n == 0) {
      if (k == 0) L.index.push_back(cur);
    } else {
      compositions(n, k, 0, cur, L.index);
    }
    while (L.degree.size() < L.index.size()) L.degree.push_back(k);
  }
  const int size = static_cast<int>(L.index.size());
  L.conv.resize(size);
  for (int g = 0; g < size; ++g) {
    for (int a = 0; a <= g; ++a) {
      MultiIndex rest{};
      bool ok = true;
      for (int v = 0; v < n; ++v) {
        if (L.index[a][v] > L.index[g][v]) {
          ok = false;
          break;
        }
        rest[v] = static_cast<std::uint8_t>(L.index[g][v] - L.index[a][v]);
      }
      if (ok) L.conv[g].emplace_back(a, L.find(rest));
    }
  }
  L.shift.assign(n, std::vector<int>(size, -1));
  for (int v = 0; v < n; ++v) {
    for (int s = 0; s < size; ++s) {
      if (L.degree[s] == d) continue;
      MultiIndex up = L.index[s];
      ++up[v];
      L.shift[v][s] = L.find(up);
    }
  }
  return L;
}

struct LayoutTable {
  std::unique_ptr<JetLayout> t[kMaxJetVars + 1][kMaxJetOrder + 1];
  LayoutTable() {
    for (int n = 0; n <= kMaxJetVars; ++n)
      for (int d = 0; d <= kMaxJetOrder; ++d) t[n][d] = std::make_unique<JetLayout>(build_layout(n, d));
  }
};

double factorial_index(const MultiIndex& a, int n) {
  double f = 1.0;
  for (int v = 0; v < n; ++v)
    for (int k = 2; k <= a[v]; ++k) f *= k;
  return f;
}

}  // namespace

int JetLayout::find(const MultiIndex& a) const {
  for (std::size_t s = 0; s < index.size(); ++s)
    if (index[s] == a) return static_cast<int>(s);
  return -1;
}

const JetLayout& JetLayout::get(int n, int d) {
  static const LayoutTable table;
  if (n < 0 || n > kMaxJetVars || d < 0 || d > kMaxJetOrder)
    throw ConfigError("jet layout out of range: n=" + std::to_string(n) + " d=" + std::to_string(d));
  return *table.t[n][d];
}

Jet::Jet(int n, int d) : layout_(&JetLayout::get(n, d)), c_(layout_->size(), 0.0) {}

Jet Jet::constant(int n, int d, double value) {
  Jet j(n, d);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int n, int d, int var, double value) {
  Jet j(n, d);
  j.c_[0] = value;
  if (d >= 1) j.c_[1 + var] = 1.0;
  return j;
}

double Jet::partial(const MultiIndex& a) const {
  int s = layout_->find(a);
  if (s < 0) throw ConfigError("multi-index beyond jet order");
  return c_[s] * factorial_index(a, layout_->n);
}

double Jet::partial(std::initializer_list<int> powers) const {
  MultiIndex a{};
  int v = 0;
  for (int p : powers) a[v++] = static_cast<std::uint8_t>(p);
  return partial(a);
}

double Jet::d1(int var) const { return layout_->d >= 1 ? c_[1 + var] : 0.0; }

Jet Jet::truncated(int d) const {
  if (d > order()) throw ConfigError("cannot raise jet order by truncation");
  Jet r(vars(), d);
  for (std::size_t s = 0; s < r.c_.size(); ++s) r.c_[s] = c_[s];
  return r;
}

Jet Jet::derivative(int var) const {
  if (order() == 0) throw ConfigError("derivative of an order-0 jet");
  Jet r(vars(), order() - 1);
  const auto& sh = layout_->shift[var];
  for (std::size_t s = 0; s < r.c_.size(); ++s)
    r.c_[s] = c_[sh[s]] * (layout_->index[s][var] + 1);
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  for (std::size_t s = 0; s < c_.size(); ++s) c_[s] += o.c_[s];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (std::size_t s = 0; s < c_.size(); ++s) c_[s] -= o.c_[s];
  return *this;
}

Jet& Jet::operator*=(double k) {
  for (double& v : c_) v *= k;
  return *this;
}

Jet& Jet::operator+=(double k) {
  c_[0] += k;
  return *this;
}

Jet operator-(Jet a) {
  for (double& v : a.c_) v = -v;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.vars(), a.order());
  const auto& conv = a.layout_->conv;
  for (std::size_t g = 0; g < r.c_.size(); ++g) {
    double acc = 0.0;
    for (auto [i, k] : conv[g]) acc += a.c_[i] * b.c_[k];
    r.c_[g] = acc;
  }
  return r;
}

void Jet::add_product(const Jet& a, const Jet& b) {
  const auto& conv = layout_->conv;
  for (std::size_t g = 0; g < c_.size(); ++g) {
    double acc = 0.0;
    for (auto [i, k] : conv[g]) acc += a.c_[i] * b.c_[k];
    c_[g] += acc;
  }
}

void Jet::add_dproduct(const Jet& a, int var, const Jet& b, double sign) {
  const std::size_t sz = c_.size();
  std::array<double, 165> da;
  const auto& sh = a.layout_->shift[var];
  bool any = false;
  for (std::size_t s = 0; s < sz; ++s) {
    da[s] = a.c_[sh[s]] * (layout_->index[s][var] + 1);
    any = any || da[s] != 0.0;
  }
  if (!any) return;
  if (std::all_of(b.c_.begin(), b.c_.begin() + sz, [](double v) { return v == 0.0; })) return;
  const auto& conv = layout_->conv;
  for (std::size_t g = 0; g < sz; ++g) {
    double acc = 0.0;
    for (auto [i, k] : conv[g]) acc += da[i] * b.c_[k];
    c_[g] += sign * acc;
  }
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.c_[0] == 0.0) throw DomainError("division by zero");
  Jet r(a.vars(), a.order());
  const auto& conv = a.layout_->conv;
  for (std::size_t g = 0; g < r.c_.size(); ++g) {
    double acc = a.c_[g];
    for (auto [i, k] : conv[g])
      if (k != 0) acc -= r.c_[i] * b.c_[k];
    r.c_[g] = acc / b.c_[0];
  }
  return r;
}

Jet Jet::compose(const double* f) const {
  const int d = order();
  Jet r = constant(vars(), d, f[0]);
  if (d == 0) return r;
  Jet h = *this;
  h.c_[0] = 0.0;
  static constexpr double inv_fact[] = {1.0, 1.0, 0.5, 1.0 / 6.0};
  // Horner in h: ((f3/6 h + f2/2) h + f1) h + f0
  Jet acc = constant(vars(), d, f[d] * inv_fact[d]);
  for (int k = d - 1; k >= 0; --k) {
    acc = acc * h;
    acc.c_[0] += f[k] * inv_fact[k];
  }
  acc.c_[0] = f[0];
  return acc;
}

bool Jet::is_zero(double tol) const {
  for (double v : c_)
    if (std::abs(v) > tol) return false;
  return true;
}

Jet pow_int(const Jet& base, int e) {
  if (e == 0) return Jet::constant(base.vars(), base.order(), 1.0);
  Jet r = base;
  for (int k = 1; k < std::abs(e); ++k) r = r * base;
  if (e < 0) r = Jet::constant(base.vars(), base.order(), 1.0) / r;
  return r;
}

Jet sin(const Jet& g) {
  double s = std::sin(g.value()), c = std::cos(g.value());
  double f[] = {s, c, -s, -c};
  return g.compose(f);
}

Jet cos(const Jet& g) {
  double s = std::sin(g.value()), c = std::cos(g.value());
  double f[] = {c, -s, -c, s};
  return g.compose(f);
}

Jet tan(const Jet& g) {
  double t = std::tan(g.value());
  double sec2 = 1.0 + t * t;
  double f[] = {t, sec2, 2.0 * t * sec2, sec2 * (2.0 + 6.0 * t * t)};
  return g.compose(f);
}

Jet exp(const Jet& g) {
  double e = std::exp(g.value());
  double f[] = {e, e, e, e};
  return g.compose(f);
}

Jet log(const Jet& g) {
  double x = g.value();
  if (!(x > 0.0)) throw DomainError("log of non-positive value");
  double f[] = {std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)};
  return g.compose(f);
}

Jet sqrt(const Jet& g) {
  double x = g.value();
  if (x < 0.0) throw DomainError("sqrt of negative value");
  double r = std::sqrt(x);
  if (r == 0.0 && g.order() > 0) throw DomainError("sqrt is not differentiable at 0");
  double f[] = {r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x)};
  return g.compose(f);
}

}  // namespace lieavg
