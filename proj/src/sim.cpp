#include "lieavg/sim.hpp"

#include <algorithm>
#include <boost/math/interpolators/makima.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "lieavg/errors.hpp"

namespace lieavg {

std::vector<double> Trajectory::column(int c) const {
  std::vector<double> r;
  r.reserve(x.size());
  for (const auto& row : x) r.push_back(row[c]);
  return r;
}

Trajectory integrate(const Rhs& rhs, std::span<const double> x0, double t0, double t1, const StepRule& rule) {
  if (!(t1 > t0)) throw ConfigError("integration span must be positive");
  if (!(rule.dt > 0.0)) throw ConfigError("step must be positive");
  const int n = static_cast<int>(x0.size());
  const double span = t1 - t0;
  const long steps = static_cast<long>(std::ceil(span / rule.dt - 1e-9));
  const double h = span / static_cast<double>(steps);

  Trajectory tr;
  tr.n = n;
  tr.t.reserve(steps + 1);
  tr.x.reserve(steps + 1);
  std::vector<double> x(x0.begin(), x0.end()), k1(n), k2(n), k3(n), k4(n), tmp(n);
  tr.t.push_back(t0);
  tr.x.push_back(x);
  for (long s = 0; s < steps; ++s) {
    const double t = t0 + static_cast<double>(s) * h;
    const double tn = s + 1 == steps ? t1 : t0 + static_cast<double>(s + 1) * h;
    try {
      rhs(t, x, k1);
      for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
      rhs(t + 0.5 * h, tmp, k2);
      for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
      rhs(t + 0.5 * h, tmp, k3);
      for (int i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
      rhs(tn, tmp, k4);
    } catch (const DomainError& e) {
      tr.diverged = true;
      tr.divergence_time = t;
      tr.divergence_reason = e.what();
      return tr;
    }
    bool bad = false;
    for (int i = 0; i < n; ++i) {
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(x[i]) || std::abs(x[i]) > rule.divergence_bound) bad = true;
    }
    if (bad) {
      tr.diverged = true;
      tr.divergence_time = tn;
      tr.divergence_reason = "state left the finite range";
      return tr;
    }
    tr.t.push_back(tn);
    tr.x.push_back(x);
  }
  return tr;
}

double oscillatory_step(const ControlAffineSystem& sys, double user_dt) {
  double kmax = 0.0;
  for (const auto& k : sys.k()) kmax = std::max(kmax, k.value());
  return std::min(user_dt, 2.0 * std::numbers::pi / (sys.omega() * kmax * 40.0));
}

Trajectory simulate_original(const ControlAffineSystem& sys, std::span<const double> x0, double t_final,
                             double user_dt, bool record_inputs) {
  if (static_cast<int>(x0.size()) != sys.n()) throw ConfigError("initial state has wrong dimension");
  StepRule rule;
  rule.dt = oscillatory_step(sys, user_dt);
  Trajectory tr = integrate([&sys](double t, std::span<const double> x, std::span<double> dx) { sys.rhs_original(t, x, dx); },
                            x0, 0.0, t_final, rule);
  if (record_inputs) {
    tr.m = sys.m();
    tr.u.reserve(tr.t.size());
    for (double t : tr.t) tr.u.push_back(sys.inputs(t));
  }
  return tr;
}

Trajectory simulate_lbs(const AveragedSystem& avg, std::span<const double> x0, double t_final, double dt) {
  if (static_cast<int>(x0.size()) != avg.system().n()) throw ConfigError("initial state has wrong dimension");
  StepRule rule;
  rule.dt = dt;
  return integrate([&avg](double, std::span<const double> z, std::span<double> dz) { avg.rhs(z, dz); }, x0, 0.0,
                   t_final, rule);
}

namespace {

bool aligned(const Trajectory& a, const Trajectory& b) {
  if (a.t.size() != b.t.size()) return false;
  for (std::size_t i = 0; i < a.t.size(); ++i)
    if (std::abs(a.t[i] - b.t[i]) > 1e-12 * std::max(1.0, std::abs(a.t[i]))) return false;
  return true;
}

// Values of b at the given times, per component.
std::vector<std::vector<double>> resample(const Trajectory& b, const std::vector<double>& times) {
  std::vector<std::vector<double>> out(times.size(), std::vector<double>(b.n));
  for (int c = 0; c < b.n; ++c) {
    if (b.size() >= 4) {
      auto xs = b.t;
      auto ys = b.column(c);
      auto spline = boost::math::interpolators::makima<std::vector<double>>(std::move(xs), std::move(ys));
      for (std::size_t i = 0; i < times.size(); ++i) out[i][c] = spline(times[i]);
    } else {
      for (std::size_t i = 0; i < times.size(); ++i) {
        double t = times[i];
        std::size_t k = 0;
        while (k + 2 < b.size() && b.t[k + 1] < t) ++k;
        if (b.size() == 1) {
          out[i][c] = b.x[0][c];
        } else {
          double w = (t - b.t[k]) / (b.t[k + 1] - b.t[k]);
          out[i][c] = (1 - w) * b.x[k][c] + w * b.x[k + 1][c];
        }
      }
    }
  }
  return out;
}

}  // namespace

std::vector<std::pair<double, double>> distance_series(const Trajectory& a, const Trajectory& b) {
  if (a.n != b.n) throw ConfigError("trajectories have different dimensions");
  if (a.t.empty() || b.t.empty()) throw ConfigError("empty trajectory");
  std::vector<std::pair<double, double>> out;
  if (aligned(a, b)) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      double s = 0.0;
      for (int c = 0; c < a.n; ++c) s += (a.x[i][c] - b.x[i][c]) * (a.x[i][c] - b.x[i][c]);
      out.emplace_back(a.t[i], std::sqrt(s));
    }
    return out;
  }
  const double lo = std::max(a.t.front(), b.t.front());
  const double hi = std::min(a.t.back(), b.t.back());
  if (lo > hi) throw ConfigError("trajectories have disjoint spans");
  std::vector<double> times;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.t[i] >= lo - 1e-12 && a.t[i] <= hi + 1e-12) {
      times.push_back(a.t[i]);
      rows.push_back(i);
    }
  auto bv = resample(b, times);
  for (std::size_t q = 0; q < times.size(); ++q) {
    double s = 0.0;
    for (int c = 0; c < a.n; ++c) s += (a.x[rows[q]][c] - bv[q][c]) * (a.x[rows[q]][c] - bv[q][c]);
    out.emplace_back(times[q], std::sqrt(s));
  }
  return out;
}

Distance compare(const Trajectory& a, const Trajectory& b) {
  auto ds = distance_series(a, b);
  Distance d;
  for (auto& [t, v] : ds) d.sup = std::max(d.sup, v);
  if (ds.size() == 1) {
    d.rms = ds[0].second;
    return d;
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < ds.size(); ++i) {
    const double h = ds[i].first - ds[i - 1].first;
    acc += 0.5 * h * (ds[i].second * ds[i].second + ds[i - 1].second * ds[i - 1].second);
  }
  const double span = ds.back().first - ds.front().first;
  d.rms = span > 0 ? std::sqrt(acc / span) : ds[0].second;
  return d;
}

Efforts efforts(const Trajectory& traj, bool full_state) {
  if (traj.m == 0 || traj.u.size() != traj.t.size()) throw ConfigError("trajectory has no recorded inputs");
  Efforts e;
  e.t = traj.t;
  e.control.assign(traj.size(), 0.0);
  e.state.assign(traj.size(), 0.0);
  auto usq = [&](std::size_t i) {
    double s = 0.0;
    for (double v : traj.u[i]) s += v * v;
    return s;
  };
  auto xsq = [&](std::size_t i) {
    if (!full_state) return traj.x[i][0] * traj.x[i][0];
    double s = 0.0;
    for (double v : traj.x[i]) s += v * v;
    return s;
  };
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double h = traj.t[i] - traj.t[i - 1];
    e.control[i] = e.control[i - 1] + 0.5 * h * (usq(i) + usq(i - 1));
    e.state[i] = e.state[i - 1] + 0.5 * h * (xsq(i) + xsq(i - 1));
  }
  return e;
}

double settling_time(const Trajectory& traj, int c, double target, double tol, double window) {
  const std::size_t N = traj.size();
  if (N == 0) return INFINITY;
  if (traj.diverged) return INFINITY;
  std::vector<double> prefix(N + 1, 0.0);
  for (std::size_t i = 0; i < N; ++i) prefix[i + 1] = prefix[i] + traj.x[i][c];
  // Samples per window, assuming the fixed-step grid produced by integrate().
  std::size_t w = 1;
  if (window > 0.0 && N > 1) {
    const double h = (traj.t.back() - traj.t.front()) / static_cast<double>(N - 1);
    w = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window / h)));
  }
  if (w > N) return INFINITY;
  // Moving average ending at sample i uses samples i-w+1..i.
  std::size_t last_bad = N;  // sentinel: none
  for (std::size_t i = w - 1; i < N; ++i) {
    const double avg = (prefix[i + 1] - prefix[i + 1 - w]) / static_cast<double>(w);
    if (!(std::abs(avg - target) < tol)) last_bad = i;
  }
  if (last_bad == N) return traj.t[w - 1];
  if (last_bad == N - 1) return INFINITY;
  return traj.t[last_bad + 1];
}

double exit_time(const Trajectory& traj, std::span<const double> lo, std::span<const double> hi) {
  for (std::size_t i = 0; i < traj.size(); ++i)
    for (int c = 0; c < traj.n; ++c)
      if (traj.x[i][c] < lo[c] || traj.x[i][c] > hi[c]) return traj.t[i];
  if (traj.diverged) return traj.divergence_time;
  return INFINITY;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const Trajectory& traj, std::ostream& os) {
  os << "t";
  for (int c = 1; c <= traj.n; ++c) os << ",x" << c;
  for (int i = 1; i <= traj.m; ++i) os << ",u" << i;
  os << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << format_double(traj.t[k]);
    for (double v : traj.x[k]) os << ',' << format_double(v);
    if (traj.m > 0)
      for (double v : traj.u[k]) os << ',' << format_double(v);
    os << '\n';
  }
}

}  // namespace lieavg
