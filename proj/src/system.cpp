#include "lieavg/system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lieavg/errors.hpp"

namespace lieavg {

namespace {

std::string strip(const std::string& s) {
  std::string r;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) r += c;
  return r;
}

const int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace

std::vector<double> halton(int index, int dim) {
  std::vector<double> r(dim);
  for (int d = 0; d < dim; ++d) {
    double f = 1.0, v = 0.0;
    int i = index;
    const int b = kPrimes[d % 8];
    while (i > 0) {
      f /= b;
      v += f * (i % b);
      i /= b;
    }
    r[d] = v;
  }
  return r;
}

ControlAffineSystem::ControlAffineSystem(SystemSpec spec) : spec_(std::move(spec)) {
  const int n = spec_.n;
  if (n < 1 || n > kMaxJetVars) throw ConfigError("dimension must be in 1..8");
  if (static_cast<int>(spec_.drift.size()) != n) throw ConfigError("drift must have one expression per state");
  if (spec_.channels.empty()) throw ConfigError("at least one control channel is required");
  if (!(spec_.omega > 0.0)) throw ConfigError("omega must be positive");
  if (spec_.box_lo.empty()) spec_.box_lo.assign(n, -1.0);
  if (spec_.box_hi.empty()) spec_.box_hi.assign(n, 1.0);
  if (static_cast<int>(spec_.box_lo.size()) != n || static_cast<int>(spec_.box_hi.size()) != n)
    throw ConfigError("domain box must have one bound per state");
  for (int v = 0; v < n; ++v)
    if (!(spec_.box_lo[v] <= spec_.box_hi[v])) throw ConfigError("domain box has lo > hi");

  for (const auto& [name, text] : spec_.definitions) {
    if (name == "s" || spec_.params.count(name)) throw ConfigError("definition '" + name + "' shadows another name");
    defs_[name] = parse(text);
  }

  Scope fs{n, false, &spec_.params, &defs_};
  auto compile_field = [&](const std::vector<std::string>& comps) {
    if (static_cast<int>(comps.size()) != n) throw ConfigError("field must have one expression per state");
    std::vector<Program> progs;
    for (const auto& c : comps) progs.push_back(compile(parse(c), fs));
    return progs;
  };
  auto key_of = [](const std::vector<std::string>& comps) {
    std::string k;
    for (const auto& c : comps) k += strip(c) + "|";
    return k;
  };

  fields_.push_back(compile_field(spec_.drift));
  keys_.push_back(key_of(spec_.drift));
  Scope ws{0, true, &spec_.params, nullptr};
  for (const auto& ch : spec_.channels) {
    if (ch.k.num <= 0 || ch.k.den <= 0) throw ConfigError("frequency ratio must be positive");
    fields_.push_back(compile_field(ch.components));
    keys_.push_back(key_of(ch.components));
    waves_.push_back(compile(parse(ch.waveform.expr), ws));
    if (ch.waveform.antiderivative && !strip(*ch.waveform.antiderivative).empty()) {
      anti_.push_back(compile(parse(*ch.waveform.antiderivative), ws));
      anti0_.push_back(anti_.back().eval({}, 0.0));
    } else {
      anti_.emplace_back();
      anti0_.push_back(0.0);
    }
    amp_.push_back(std::pow(spec_.omega, ch.p));
    kval_.push_back(ch.k.value());
  }
  if (spec_.guard) guard_ = compile(parse(spec_.guard->expr), fs);

  for (int i = 0; i <= m(); ++i) {
    bool c = std::none_of(fields_[i].begin(), fields_[i].end(), [](const Program& p) { return p.uses_state(); });
    if (i > 0 && spec_.guard) c = false;
    constant_.push_back(c);
  }
}

std::vector<double> ControlAffineSystem::p() const {
  std::vector<double> r;
  for (const auto& c : spec_.channels) r.push_back(c.p);
  return r;
}

std::vector<Rational> ControlAffineSystem::k() const {
  std::vector<Rational> r;
  for (const auto& c : spec_.channels) r.push_back(c.k);
  return r;
}

ControlAffineSystem ControlAffineSystem::with_omega(double omega) const {
  SystemSpec s = spec_;
  s.omega = omega;
  return ControlAffineSystem(std::move(s));
}

double ControlAffineSystem::waveform(int i, double s) const { return waves_[i - 1].eval({}, s); }

double ControlAffineSystem::antiderivative(int i, double s) const {
  if (anti_[i - 1].empty()) throw ConfigError("channel has no closed-form antiderivative");
  return anti_[i - 1].eval({}, s) - anti0_[i - 1];
}

bool ControlAffineSystem::guard_active(std::span<const double> x) const {
  if (!spec_.guard) return false;
  return std::abs(guard_.eval(x)) <= spec_.guard->threshold;
}

void ControlAffineSystem::field(int i, std::span<const double> x, std::span<double> out) const {
  if (i > 0 && guard_active(x)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  for (int c = 0; c < n(); ++c) out[c] = fields_[i][c].eval(x);
}

std::vector<double> ControlAffineSystem::field(int i, std::span<const double> x) const {
  std::vector<double> r(n());
  field(i, x, r);
  return r;
}

std::vector<Jet> ControlAffineSystem::field_jet(int i, std::span<const double> x, int order) const {
  std::vector<Jet> r;
  r.reserve(n());
  if (i > 0 && guard_active(x)) {
    for (int c = 0; c < n(); ++c) r.emplace_back(n(), order);
    return r;
  }
  for (int c = 0; c < n(); ++c) r.push_back(fields_[i][c].eval_jet(x, order));
  return r;
}

bool ControlAffineSystem::field_is_constant(int i) const { return constant_[i]; }

void ControlAffineSystem::rhs_original(double t, std::span<const double> x, std::span<double> out) const {
  const int nn = n();
  field(0, x, out);
  double buf[kMaxJetVars];
  std::span<double> b(buf, nn);
  for (int i = 1; i <= m(); ++i) {
    double u;
    try {
      u = waves_[i - 1].eval({}, kval_[i - 1] * spec_.omega * t);
      if (u == 0.0) continue;
      field(i, x, b);
    } catch (const DomainError& e) {
      throw DomainError("channel " + std::to_string(i) + ": " + e.what());
    }
    const double w = amp_[i - 1] * u;
    for (int c = 0; c < nn; ++c) out[c] += w * b[c];
  }
}

std::vector<double> ControlAffineSystem::rhs_original(double t, std::span<const double> x) const {
  std::vector<double> r(n());
  rhs_original(t, x, r);
  return r;
}

std::vector<double> ControlAffineSystem::inputs(double t) const {
  std::vector<double> r;
  for (int i = 1; i <= m(); ++i) r.push_back(waves_[i - 1].eval({}, kval_[i - 1] * spec_.omega * t));
  return r;
}

std::vector<double> ControlAffineSystem::box_center() const {
  std::vector<double> c(n());
  for (int v = 0; v < n(); ++v) c[v] = 0.5 * (spec_.box_lo[v] + spec_.box_hi[v]);
  return c;
}

std::vector<std::vector<double>> ControlAffineSystem::probe_points(int count) const {
  std::vector<std::vector<double>> pts;
  for (int k = 1; k <= count; ++k) {
    auto h = halton(k, n());
    for (int v = 0; v < n(); ++v) h[v] = spec_.box_lo[v] + h[v] * (spec_.box_hi[v] - spec_.box_lo[v]);
    pts.push_back(std::move(h));
  }
  return pts;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckEntry& c) { return c.passed; });
}

const CheckEntry* ValidationReport::find(const std::string& name, int channel) const {
  for (const auto& c : checks)
    if (c.name == name && c.channel == channel) return &c;
  return nullptr;
}

ValidationReport validate(const ControlAffineSystem& sys, const ValidateOptions& opt) {
  ValidationReport rep;
  const double two_pi = 2.0 * std::numbers::pi;

  for (int i = 1; i <= sys.m(); ++i) {
    const auto& ch = sys.channel(i);
    {
      CheckEntry e{"amplitude_exponent", i, ch.p > 0.0 && ch.p < 1.0, {{"p", ch.p}}, ""};
      if (!e.passed) e.message = "p must lie in (0,1)";
      rep.checks.push_back(e);
    }
    {
      CheckEntry e{"frequency_ratio", i, ch.k.num > 0 && ch.k.den > 0,
                   {{"k_num", static_cast<double>(ch.k.num)}, {"k_den", static_cast<double>(ch.k.den)}}, ""};
      rep.checks.push_back(e);
    }
    try {
      double resid = 0.0;
      for (int q = 0; q < opt.periodic_probes; ++q) {
        double s = two_pi * (q + 0.318) / opt.periodic_probes;
        resid = std::max(resid, std::abs(sys.waveform(i, s) - sys.waveform(i, s + two_pi)));
      }
      CheckEntry per{"periodic", i, resid <= 1e-9, {{"residual", resid}}, ""};
      if (!per.passed) per.message = "waveform is not 2*pi-periodic in s";
      rep.checks.push_back(per);

      double sum = 0.0, sup = 0.0;
      bool finite = true;
      for (int q = 0; q < opt.grid; ++q) {
        double u = sys.waveform(i, two_pi * q / opt.grid);
        if (!std::isfinite(u)) finite = false;
        sum += u;
        sup = std::max(sup, std::abs(u));
      }
      double mean = sum / opt.grid;
      CheckEntry zm{"zero_mean", i, finite && std::abs(mean) <= 1e-8, {{"mean", mean}}, ""};
      if (!zm.passed) zm.message = "waveform mean over one period is not zero";
      rep.checks.push_back(zm);
      CheckEntry bd{"bounded", i, finite, {{"sup", finite ? sup : INFINITY}}, ""};
      if (!finite) bd.message = "waveform is not finite on the grid";
      rep.checks.push_back(bd);

      if (sys.has_antiderivative(i)) {
        double err = 0.0;
        const double h = 1e-5;
        for (int q = 0; q < opt.periodic_probes; ++q) {
          double s = two_pi * (q + 0.5) / opt.periodic_probes;
          double fd = (sys.antiderivative(i, s + h) - sys.antiderivative(i, s - h)) / (2 * h);
          err = std::max(err, std::abs(fd - sys.waveform(i, s)));
        }
        CheckEntry ad{"antiderivative", i, err <= 1e-6, {{"residual", err}}, ""};
        if (!ad.passed) ad.message = "declared antiderivative does not differentiate to the waveform";
        rep.checks.push_back(ad);
      }
    } catch (const std::exception& ex) {
      rep.checks.push_back({"waveform_eval", i, false, {}, ex.what()});
    }
  }

  auto pts = sys.probe_points(opt.probe_points);
  pts.push_back(sys.box_center());
  for (int i = 0; i <= sys.m(); ++i) {
    CheckEntry e{"smooth", i, true, {{"points", static_cast<double>(pts.size())}}, ""};
    double sup = 0.0;
    for (const auto& x : pts) {
      try {
        for (const auto& j : sys.field_jet(i, x, 3))
          for (double c : j.coeffs()) {
            if (!std::isfinite(c)) throw DomainError("non-finite derivative");
            sup = std::max(sup, std::abs(c));
          }
      } catch (const std::exception& ex) {
        e.passed = false;
        e.message = std::string(ex.what()) + " at x=(";
        for (std::size_t v = 0; v < x.size(); ++v) e.message += (v ? "," : "") + std::to_string(x[v]);
        e.message += ")";
        break;
      }
    }
    e.measured["sup_coeff"] = sup;
    rep.checks.push_back(e);
  }
  if (sys.spec().guard)
    rep.caveats.push_back("control fields are defined piecewise: they vanish where |" + sys.spec().guard->expr +
                          "| <= " + std::to_string(sys.spec().guard->threshold) +
                          "; smoothness holds only away from that set");
  return rep;
}

ValidationReport validate(const SystemSpec& spec, const ValidateOptions& opt) {
  try {
    return validate(ControlAffineSystem(spec), opt);
  } catch (const std::exception& ex) {
    ValidationReport rep;
    rep.checks.push_back({"build", 0, false, {}, ex.what()});
    return rep;
  }
}

}  // namespace lieavg
