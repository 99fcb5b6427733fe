#include "lieavg/lbs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "lieavg/errors.hpp"

namespace lieavg {

AveragedSystem::AveragedSystem(std::shared_ptr<const ControlAffineSystem> sys, int r, double omega,
                               std::vector<LbsTerm> terms)
    : sys_(std::move(sys)), r_(r), omega_(omega), terms_(std::move(terms)) {
  std::map<std::pair<int, std::string>, std::size_t> slot;
  for (const auto& t : terms_) {
    const int ord = family_order(t.coeff.family);
    auto key = std::make_pair(ord, field_key(t.expr, *sys_));
    auto it = slot.find(key);
    if (it == slot.end()) {
      slot.emplace(key, plan_.size());
      plan_.push_back({t.expr, t.weight, ord});
    } else {
      plan_[it->second].weight += t.weight;
    }
    max_depth_ = std::max(max_depth_, depth(t.expr));
  }
  std::erase_if(plan_, [](const PlanEntry& p) { return p.weight == 0.0; });
}

void AveragedSystem::eval(std::span<const double> z, std::span<double> out, int only_order) const {
  const int n = sys_->n();
  if (only_order == 0) {
    sys_->field(0, z, out);
  } else {
    std::fill(out.begin(), out.end(), 0.0);
  }
  if (plan_.empty()) return;
  BracketEvaluator ev(*sys_, z, max_depth_);
  for (const auto& p : plan_) {
    if (only_order != 0 && p.order != only_order) continue;
    const auto& j = ev.eval(p.expr, 0);
    for (int c = 0; c < n; ++c) out[c] += p.weight * j[c].value();
  }
}

void AveragedSystem::rhs(std::span<const double> z, std::span<double> out) const { eval(z, out, 0); }

std::vector<double> AveragedSystem::rhs(std::span<const double> z) const {
  std::vector<double> r(sys_->n());
  eval(z, r, 0);
  return r;
}

std::vector<double> AveragedSystem::L(int i, std::span<const double> z) const {
  if (i < 1 || i > 4) throw ConfigError("L index must be in 1..4");
  std::vector<double> r(sys_->n(), 0.0);
  if (i == 1) return r;
  eval(z, r, i);
  return r;
}

AveragedSystem assemble(std::shared_ptr<const ControlAffineSystem> sys, int r, const CoefficientTable& table,
                        double omega, const AssembleOptions& opt) {
  if (r < 1 || r > 4) throw ConfigError("truncation order r must be in 1..4");
  if (!(omega > 0.0)) throw ConfigError("omega must be positive");
  std::vector<LbsTerm> terms;
  for (const auto& bt : enumerate_brackets(sys->m(), r)) {
    const Coefficient& c = table.at(bt.family, bt.indices);
    if (opt.prune && zero_check(bt.expr, *sys).zero) continue;
    terms.push_back({bt.expr, c, c.at(omega)});
  }
  return AveragedSystem(std::move(sys), r, omega, std::move(terms));
}

AveragedSystem assemble(const ControlAffineSystem& sys, int r, const CoefficientTable& table, double omega,
                        const AssembleOptions& opt) {
  return assemble(std::make_shared<const ControlAffineSystem>(sys), r, table, omega, opt);
}

AveragedSystem assemble_asymptote(const ControlAffineSystem& sys, int r, const CoefficientTable& table,
                                  double zero_tol) {
  if (r < 1 || r > 4) throw ConfigError("truncation order r must be in 1..4");
  auto shared = std::make_shared<const ControlAffineSystem>(sys);
  std::vector<LbsTerm> terms;
  for (const auto& bt : enumerate_brackets(sys.m(), r)) {
    const Coefficient& c = table.at(bt.family, bt.indices);
    if (c.cls == Boundedness::Vanishing) continue;
    if (zero_check(bt.expr, sys).zero) continue;
    if (c.cls == Boundedness::Unbounded) {
      if (std::abs(c.value) <= zero_tol) continue;
      std::string idx;
      for (int j : c.indices) idx += std::to_string(j);
      throw ConfigError(std::string("no finite limit: ") + family_name(c.family) + "_" + idx +
                        " is unbounded with value " + std::to_string(c.value));
    }
    terms.push_back({bt.expr, c, c.value});
  }
  return AveragedSystem(shared, r, INFINITY, std::move(terms));
}

std::vector<TauTerm> lambda_tau(const ControlAffineSystem& sys, int i, const CoefficientTable& table, double omega,
                                std::optional<double> p_star) {
  if (i < 1 || i > 4) throw ConfigError("Lambda index must be in 1..4");
  const auto p = sys.p();
  const double ps = p_star ? *p_star : *std::max_element(p.begin(), p.end());
  const double eps = std::pow(omega, ps - 1.0);
  auto eta = [&](int j) { return std::pow(omega, p[j - 1] - ps); };
  std::vector<TauTerm> out;
  if (i == 1) {
    // Lambda_1 = eps * sum eta_i * mean(u_i) * b_i
    const int N = 4096;
    for (int j = 1; j <= sys.m(); ++j) {
      double s = 0.0;
      for (int q = 0; q < N; ++q) s += sys.waveform(j, 2.0 * std::numbers::pi * q / N);
      out.push_back({leaf(j), eps * eta(j) * (s / N)});
    }
    return out;
  }
  // Table values already carry the 1/(2T'), 1/(3T'), 1/(12T') prefactors.
  const double fact = i == 2 ? 2.0 : i == 3 ? 3.0 : 12.0;
  const double eps_pow = std::pow(eps, i);
  for (const auto& bt : enumerate_brackets(sys.m(), i)) {
    if (family_order(bt.family) != i) continue;
    const Coefficient& c = table.at(bt.family, bt.indices);
    double prod = 1.0;
    for (int j : bt.indices) prod *= eta(j);
    const double integral_avg = fact * c.value;
    out.push_back({bt.expr, eps_pow / fact * prod * integral_avg});
  }
  return out;
}

std::vector<double> eval_tau_terms(const ControlAffineSystem& sys, const std::vector<TauTerm>& terms,
                                   std::span<const double> z) {
  std::vector<double> r(sys.n(), 0.0);
  int d = 0;
  for (const auto& t : terms) d = std::max(d, depth(t.expr));
  BracketEvaluator ev(sys, z, d);
  for (const auto& t : terms) {
    const auto& j = ev.eval(t.expr, 0);
    for (int c = 0; c < sys.n(); ++c) r[c] += t.weight * j[c].value();
  }
  return r;
}

}  // namespace lieavg
