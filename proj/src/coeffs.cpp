#include "lieavg/coeffs.hpp"

#include <cmath>
#include <cstdio>

#include "lieavg/errors.hpp"
#include "lieavg/quadrature.hpp"

namespace lieavg {

const char* boundedness_name(Boundedness b) {
  switch (b) {
    case Boundedness::Vanishing: return "vanishing";
    case Boundedness::Bounded: return "bounded";
    case Boundedness::Unbounded: return "unbounded";
  }
  return "?";
}

Boundedness classify(double e) {
  if (e < -1e-9) return Boundedness::Vanishing;
  if (e > 1e-9) return Boundedness::Unbounded;
  return Boundedness::Bounded;
}

double Coefficient::at(double omega) const { return value * std::pow(omega, omega_exponent); }

double omega_exponent(const ControlAffineSystem& sys, const std::vector<int>& idx) {
  double s = 0.0;
  for (int j : idx) s += sys.channel(j).p;
  double e = s - static_cast<double>(idx.size() - 1);
  // Snap representation noise so that e.g. 0.99 + 0.01 - 1 reports as 0.
  double snapped = std::round(e * 1e12) / 1e12;
  return snapped == 0.0 ? 0.0 : snapped;
}

CoefficientGrid::CoefficientGrid(const ControlAffineSystem& sys, int intervals)
    : sys_(sys), N_(intervals), Tp_(common_period(sys.k()).value), h_(Tp_ / intervals) {
  if (intervals < 5) throw ConfigError("coefficient grid needs at least 5 intervals");
  const int m = sys.m();
  u_.assign(m + 1, {});
  U_.assign(m + 1, {});
  for (int j = 1; j <= m; ++j) {
    const double k = sys.channel(j).k.value();
    std::vector<double> u(N_ + 1);
    for (int i = 0; i <= N_; ++i) u[i] = sys.waveform(j, k * (i * h_));
    if (sys.has_antiderivative(j)) {
      std::vector<double> U(N_ + 1);
      for (int i = 0; i <= N_; ++i) U[i] = sys.antiderivative(j, k * (i * h_)) / k;
      U_[j] = std::move(U);
    } else {
      U_[j] = cumulative_integral(u, h_);
    }
    u_[j] = std::move(u);
  }
}

const std::vector<double>& CoefficientGrid::alpha1(int a, int b) {
  auto key = std::make_pair(a, b);
  auto it = a1_.find(key);
  if (it != a1_.end()) return it->second;
  std::vector<double> r(N_ + 1);
  for (int i = 0; i <= N_; ++i) r[i] = u_[b][i] * U_[a][i] - u_[a][i] * U_[b][i];
  return a1_.emplace(key, std::move(r)).first->second;
}

const std::vector<double>& CoefficientGrid::alpha2(int a, int b) {
  auto key = std::make_pair(a, b);
  auto it = a2_.find(key);
  if (it != a2_.end()) return it->second;
  return a2_.emplace(key, cumulative_integral(alpha1(a, b), h_)).first->second;
}

const std::vector<double>& CoefficientGrid::P(int a, int b, int e) {
  auto key = std::make_tuple(a, b, e);
  auto it = P_.find(key);
  if (it != P_.end()) return it->second;
  const auto& A2 = alpha2(a, b);
  std::vector<double> f(N_ + 1);
  for (int i = 0; i <= N_; ++i) f[i] = u_[e][i] * A2[i];
  return P_.emplace(key, cumulative_integral(f, h_)).first->second;
}

const std::vector<double>& CoefficientGrid::Q(int a, int b, int l) {
  auto key = std::make_tuple(a, b, l);
  auto it = Q_.find(key);
  if (it != Q_.end()) return it->second;
  const auto& A1 = alpha1(a, b);
  std::vector<double> f(N_ + 1);
  for (int i = 0; i <= N_; ++i) f[i] = A1[i] * U_[l][i];
  return Q_.emplace(key, cumulative_integral(f, h_)).first->second;
}

double CoefficientGrid::nu2(int j1, int j2) { return integral(alpha1(j1, j2), h_) / (2.0 * Tp_); }

double CoefficientGrid::nu3(int j1, int j2, int j3) {
  const auto& A1 = alpha1(j1, j2);
  std::vector<double> f(N_ + 1);
  for (int i = 0; i <= N_; ++i) f[i] = U_[j3][i] * A1[i];
  return integral(f, h_) / (3.0 * Tp_);
}

double CoefficientGrid::beta1(int j1, int j2, int j3, int j4) {
  const auto& Pe = P(j1, j2, j3);
  const auto& Pl = P(j1, j2, j4);
  std::vector<double> f(N_ + 1);
  for (int i = 0; i <= N_; ++i) f[i] = u_[j4][i] * Pe[i] - u_[j3][i] * Pl[i];
  return integral(f, h_) / (12.0 * Tp_);
}

double CoefficientGrid::beta2(int j1, int j2, int j3, int j4) {
  const auto& Pe = P(j1, j2, j3);
  const auto& Ql = Q(j1, j2, j4);
  std::vector<double> f(N_ + 1);
  for (int i = 0; i <= N_; ++i) f[i] = Pe[i] * u_[j4][i] - u_[j3][i] * Ql[i];
  return integral(f, h_) / (12.0 * Tp_);
}

double CoefficientGrid::value(Family f, const std::vector<int>& x) {
  if (static_cast<int>(x.size()) != family_order(f)) throw ConfigError("wrong index count for coefficient family");
  for (int j : x)
    if (j < 1 || j > sys_.m()) throw ConfigError("channel index out of range");
  switch (f) {
    case Family::Nu2: return nu2(x[0], x[1]);
    case Family::Nu3: return nu3(x[0], x[1], x[2]);
    case Family::Beta1: return beta1(x[0], x[1], x[2], x[3]);
    case Family::Beta2: return beta2(x[0], x[1], x[2], x[3]);
    default: throw ConfigError("legacy coefficients are not grid families");
  }
}

Coefficient converge(Family f, const std::vector<int>& idx, double exponent,
                     const std::function<double(int)>& value_at, const QuadratureOptions& opt) {
  Coefficient c;
  c.family = f;
  c.indices = idx;
  c.omega_exponent = exponent;
  c.cls = classify(exponent);
  int N = opt.initial_grid;
  double prev = value_at(N);
  c.converged = false;
  while (2 * N <= opt.max_grid) {
    N *= 2;
    double cur = value_at(N);
    double diff = std::abs(cur - prev);
    prev = cur;
    if (diff <= opt.rel_tol * std::abs(cur) || diff <= opt.abs_tol) {
      c.converged = true;
      break;
    }
  }
  c.value = prev;
  c.grid = N;
  return c;
}

namespace {

Coefficient grid_coefficient(const ControlAffineSystem& sys, Family f, const std::vector<int>& idx,
                             const QuadratureOptions& opt) {
  return converge(f, idx, omega_exponent(sys, idx),
                  [&](int N) { return CoefficientGrid(sys, N).value(f, idx); }, opt);
}

}  // namespace

Coefficient nu2(const ControlAffineSystem& sys, int j1, int j2, const QuadratureOptions& opt) {
  return grid_coefficient(sys, Family::Nu2, {j1, j2}, opt);
}

Coefficient nu3(const ControlAffineSystem& sys, int j1, int j2, int j3, const QuadratureOptions& opt) {
  return grid_coefficient(sys, Family::Nu3, {j1, j2, j3}, opt);
}

Coefficient beta(const ControlAffineSystem& sys, Family family, int j1, int j2, int j3, int j4,
                 const QuadratureOptions& opt) {
  if (family != Family::Beta1 && family != Family::Beta2) throw ConfigError("beta family must be beta1 or beta2");
  return grid_coefficient(sys, family, {j1, j2, j3, j4}, opt);
}

namespace {

// Samples u_j(k_j omega t) on t in [0, T], T = T'/omega.
std::vector<double> t_samples(const ControlAffineSystem& sys, int j, double T, int N) {
  std::vector<double> r(N + 1);
  const double k = sys.channel(j).k.value();
  const double h = T / N;
  for (int q = 0; q <= N; ++q) r[q] = sys.waveform(j, k * sys.omega() * (q * h));
  return r;
}

// int_0^t int_0^s (u_j(s) u_i(p) - u_i(s) u_j(p)) dp ds on the t grid.
std::vector<double> legacy_inner(const std::vector<double>& ui, const std::vector<double>& uj, double h) {
  auto Ui = cumulative_integral(ui, h);
  auto Uj = cumulative_integral(uj, h);
  std::vector<double> f(ui.size());
  for (std::size_t q = 0; q < f.size(); ++q) f[q] = uj[q] * Ui[q] - ui[q] * Uj[q];
  return cumulative_integral(f, h);
}

}  // namespace

double nu2_legacy_at(const ControlAffineSystem& sys, int i, int j, int N) {
  const double T = common_period(sys.k()).value / sys.omega();
  const double h = T / N;
  auto ui = t_samples(sys, i, T, N);
  auto uj = t_samples(sys, j, T, N);
  auto Ui = cumulative_integral(ui, h);
  std::vector<double> f(N + 1);
  for (int q = 0; q <= N; ++q) f[q] = uj[q] * Ui[q];
  const double pw = std::pow(sys.omega(), sys.channel(i).p + sys.channel(j).p);
  return pw / T * integral(f, h);
}

double nu3_legacy_at(const ControlAffineSystem& sys, int i, int j, int k, int N) {
  const double T = common_period(sys.k()).value / sys.omega();
  const double h = T / N;
  auto ui = t_samples(sys, i, T, N);
  auto uj = t_samples(sys, j, T, N);
  auto uk = t_samples(sys, k, T, N);
  auto inner = legacy_inner(ui, uj, h);
  std::vector<double> f(N + 1);
  for (int q = 0; q <= N; ++q) f[q] = uk[q] * inner[q];
  const double pw = std::pow(sys.omega(), sys.channel(i).p + sys.channel(j).p + sys.channel(k).p);
  return pw / (3.0 * T) * integral(f, h);
}

Coefficient nu2_legacy(const ControlAffineSystem& sys, int i, int j, const QuadratureOptions& opt) {
  const std::vector<int> idx{i, j};
  const double e = omega_exponent(sys, idx);
  const double scale = std::pow(sys.omega(), e);
  return converge(Family::LegacyNu2, idx, e, [&](int N) { return nu2_legacy_at(sys, i, j, N) / scale; }, opt);
}

Coefficient nu3_legacy(const ControlAffineSystem& sys, int i, int j, int k, const QuadratureOptions& opt) {
  const std::vector<int> idx{i, j, k};
  const double e = omega_exponent(sys, idx);
  const double scale = std::pow(sys.omega(), e);
  return converge(Family::LegacyNu3, idx, e, [&](int N) { return nu3_legacy_at(sys, i, j, k, N) / scale; }, opt);
}

const Coefficient* CoefficientTable::find(Family f, const std::vector<int>& idx) const {
  for (const auto& c : entries)
    if (c.family == f && c.indices == idx) return &c;
  return nullptr;
}

const Coefficient& CoefficientTable::at(Family f, const std::vector<int>& idx) const {
  const Coefficient* c = find(f, idx);
  if (!c) {
    std::string s;
    for (int j : idx) s += (s.empty() ? "" : ",") + std::to_string(j);
    throw ConfigError(std::string("missing coefficient ") + family_name(f) + "(" + s + ")");
  }
  return *c;
}

bool CoefficientTable::all_converged() const {
  for (const auto& c : entries)
    if (!c.converged) return false;
  return true;
}

std::string format_coefficient(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void CoefficientTable::write_csv(std::ostream& os) const {
  os << "family,indices,value,omega_exponent,class,converged\n";
  for (const auto& c : entries) {
    std::string idx;
    for (int j : c.indices) idx += (idx.empty() ? "" : ",") + std::to_string(j);
    os << family_name(c.family) << ",\"" << idx << "\"," << format_coefficient(c.value) << ','
       << format_coefficient(c.omega_exponent) << ',' << boundedness_name(c.cls) << ','
       << (c.converged ? "true" : "false") << '\n';
  }
}

CoefficientTable build_table(const ControlAffineSystem& sys, int r, const QuadratureOptions& opt) {
  CoefficientTable t;
  t.period = common_period(sys.k());
  auto terms = enumerate_brackets(sys.m(), r);
  const std::size_t K = terms.size();
  std::vector<double> prev(K), cur(K);
  std::vector<bool> done(K, false);
  t.entries.resize(K);
  for (std::size_t q = 0; q < K; ++q) {
    auto& c = t.entries[q];
    c.family = terms[q].family;
    c.indices = terms[q].indices;
    c.omega_exponent = omega_exponent(sys, c.indices);
    c.cls = classify(c.omega_exponent);
    c.converged = false;
  }
  if (K == 0) {
    t.grid = opt.initial_grid;
    return t;
  }
  int N = opt.initial_grid;
  {
    CoefficientGrid g(sys, N);
    for (std::size_t q = 0; q < K; ++q) prev[q] = g.value(terms[q].family, terms[q].indices);
  }
  while (2 * N <= opt.max_grid) {
    N *= 2;
    CoefficientGrid g(sys, N);
    bool all = true;
    for (std::size_t q = 0; q < K; ++q) {
      if (done[q]) continue;
      cur[q] = g.value(terms[q].family, terms[q].indices);
      const double diff = std::abs(cur[q] - prev[q]);
      auto& c = t.entries[q];
      c.value = cur[q];
      c.grid = N;
      if (diff <= opt.rel_tol * std::abs(cur[q]) || diff <= opt.abs_tol) {
        c.converged = true;
        done[q] = true;
      } else {
        all = false;
      }
      prev[q] = cur[q];
    }
    if (all) break;
  }
  for (std::size_t q = 0; q < K; ++q)
    if (t.entries[q].grid == 0) {  // only possible when max_grid < 2 * initial_grid
      t.entries[q].value = prev[q];
      t.entries[q].grid = N;
    }
  t.grid = N;
  return t;
}

}  // namespace lieavg
