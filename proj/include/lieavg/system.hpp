#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lieavg/expr.hpp"
#include "lieavg/jet.hpp"
#include "lieavg/rational.hpp"

namespace lieavg {

struct WaveformSpec {
  std::string expr;                           // in the phase variable s
  std::optional<std::string> antiderivative;  // optional closed form, any constant
};

struct ChannelSpec {
  std::vector<std::string> components;  // b_i, one expression per state
  double p = 0.5;                       // amplitude exponent
  Rational k{1, 1};                     // frequency ratio
  WaveformSpec waveform;
};

/// Control fields vanish wherever |guard(x)| <= threshold.
struct GuardSpec {
  std::string expr;
  double threshold = 1e-12;
};

/// Plain description of x' = b0(x) + sum_i omega^{p_i} b_i(x) u_i(k_i omega t).
struct SystemSpec {
  std::string name;
  int n = 1;
  std::map<std::string, double> params;
  std::vector<std::pair<std::string, std::string>> definitions;  // name -> expression, inlined at bind
  std::vector<std::string> drift;
  std::vector<ChannelSpec> channels;
  double omega = 1.0;
  std::vector<double> box_lo, box_hi;  // validation / probe box
  std::optional<GuardSpec> guard;
};

/// Compiled, immutable system. Field index 0 is the drift, 1..m the control fields.
class ControlAffineSystem {
 public:
  explicit ControlAffineSystem(SystemSpec spec);

  const SystemSpec& spec() const { return spec_; }
  int n() const { return spec_.n; }
  int m() const { return static_cast<int>(spec_.channels.size()); }
  double omega() const { return spec_.omega; }
  const ChannelSpec& channel(int i) const { return spec_.channels[i - 1]; }
  std::vector<double> p() const;
  std::vector<Rational> k() const;

  ControlAffineSystem with_omega(double omega) const;

  /// u_i(s) and, when declared, U_i(s) = A_i(s) - A_i(0).
  double waveform(int i, double s) const;
  bool has_antiderivative(int i) const { return !anti_[i - 1].empty(); }
  double antiderivative(int i, double s) const;

  void field(int i, std::span<const double> x, std::span<double> out) const;
  std::vector<double> field(int i, std::span<const double> x) const;
  std::vector<Jet> field_jet(int i, std::span<const double> x, int order) const;

  bool field_is_constant(int i) const;
  /// Canonical text of field i; equal keys mean identical fields.
  const std::string& field_key(int i) const { return keys_[i]; }

  bool guard_active(std::span<const double> x) const;

  void rhs_original(double t, std::span<const double> x, std::span<double> out) const;
  std::vector<double> rhs_original(double t, std::span<const double> x) const;

  /// Values of u_i(k_i omega t) for all channels.
  std::vector<double> inputs(double t) const;

  /// Center of the probe box.
  std::vector<double> box_center() const;
  /// Deterministic low-discrepancy points inside the probe box.
  std::vector<std::vector<double>> probe_points(int count) const;

 private:
  SystemSpec spec_;
  std::map<std::string, Expr> defs_;
  std::vector<std::vector<Program>> fields_;  // [0..m][component]
  std::vector<Program> waves_;
  std::vector<Program> anti_;
  std::vector<double> anti0_;
  std::vector<double> amp_;    // omega^{p_i}
  std::vector<double> kval_;   // k_i as double
  Program guard_;
  std::vector<std::string> keys_;
  std::vector<bool> constant_;
};

struct CheckEntry {
  std::string name;    // e.g. "zero_mean"
  int channel = 0;     // 0 for drift / system-wide checks
  bool passed = true;
  std::map<std::string, double> measured;
  std::string message;
};

struct ValidationReport {
  std::vector<CheckEntry> checks;
  std::vector<std::string> caveats;
  bool ok() const;
  const CheckEntry* find(const std::string& name, int channel) const;
};

struct ValidateOptions {
  int probe_points = 64;     // A1 probe points inside the box
  int grid = 4096;           // waveform grid for mean / bound
  int periodic_probes = 16;
};

ValidationReport validate(const ControlAffineSystem& sys, const ValidateOptions& opt = {});
/// Validates a raw spec, reporting parse/bind failures as report entries.
ValidationReport validate(const SystemSpec& spec, const ValidateOptions& opt = {});

/// Halton point in [0,1)^dim with the given index (index >= 1).
std::vector<double> halton(int index, int dim);

}  // namespace lieavg
