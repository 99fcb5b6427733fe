#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lieavg/coeffs.hpp"
#include "lieavg/geometry.hpp"
#include "lieavg/system.hpp"

namespace lieavg {

struct LbsTerm {
  BracketExpr expr;
  Coefficient coeff;
  double weight = 0.0;  // coeff.value * omega^coeff.omega_exponent
};

/// Time-invariant r-order Lie bracket system z' = b0(z) + L2(z) + ... + Lr(z).
class AveragedSystem {
 public:
  AveragedSystem(std::shared_ptr<const ControlAffineSystem> sys, int r, double omega, std::vector<LbsTerm> terms);

  const ControlAffineSystem& system() const { return *sys_; }
  int order() const { return r_; }
  double omega() const { return omega_; }
  const std::vector<LbsTerm>& terms() const { return terms_; }

  void rhs(std::span<const double> z, std::span<double> out) const;
  std::vector<double> rhs(std::span<const double> z) const;
  /// Sum of the L_i terms only (no drift) for a single order i in 2..4.
  std::vector<double> L(int i, std::span<const double> z) const;

 private:
  struct PlanEntry {
    BracketExpr expr;
    double weight;
    int order;
  };
  std::shared_ptr<const ControlAffineSystem> sys_;
  int r_;
  double omega_;
  std::vector<LbsTerm> terms_;
  std::vector<PlanEntry> plan_;  // terms merged by field-identical bracket
  int max_depth_ = 0;

  void eval(std::span<const double> z, std::span<double> out, int only_order) const;
};

struct AssembleOptions {
  bool prune = true;  // drop brackets that vanish identically
};

/// Realizes the LBS at the given omega from an omega-free coefficient table.
AveragedSystem assemble(std::shared_ptr<const ControlAffineSystem> sys, int r, const CoefficientTable& table,
                        double omega, const AssembleOptions& opt = {});
AveragedSystem assemble(const ControlAffineSystem& sys, int r, const CoefficientTable& table, double omega,
                        const AssembleOptions& opt = {});

/// omega -> infinity limit of the LBS: vanishing terms dropped, bounded terms
/// kept at their period-average value. Throws ConfigError when an unbounded
/// term carries a nonzero coefficient and a nonzero bracket.
AveragedSystem assemble_asymptote(const ControlAffineSystem& sys, int r, const CoefficientTable& table,
                                  double zero_tol = 1e-9);

/// Weighted bracket in the tau scale.
struct TauTerm {
  BracketExpr expr;
  double weight;
};

/// Lambda_i (i = 1..4) in the tau scale with epsilon = omega^{p*-1} and
/// eta_i = omega^{p_i - p*}. When p_star is empty, p* = max p_i.
std::vector<TauTerm> lambda_tau(const ControlAffineSystem& sys, int i, const CoefficientTable& table, double omega,
                                std::optional<double> p_star = std::nullopt);
std::vector<double> eval_tau_terms(const ControlAffineSystem& sys, const std::vector<TauTerm>& terms,
                                   std::span<const double> z);

}  // namespace lieavg
