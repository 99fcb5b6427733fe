#pragma once

#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lieavg/geometry.hpp"
#include "lieavg/rational.hpp"
#include "lieavg/system.hpp"

namespace lieavg {

enum class Boundedness { Vanishing, Bounded, Unbounded };
const char* boundedness_name(Boundedness b);
/// Class of omega^e: vanishing for e < -1e-9, bounded for |e| <= 1e-9, unbounded otherwise.
Boundedness classify(double omega_exponent);

struct Coefficient {
  Family family = Family::Nu2;
  std::vector<int> indices;
  double value = 0.0;           // omega-free period average
  double omega_exponent = 0.0;  // sum of p over indices minus (len - 1)
  Boundedness cls = Boundedness::Bounded;
  bool converged = true;
  int grid = 0;  // grid size of the reported value

  /// Numeric coefficient at the given omega.
  double at(double omega) const;
};

struct QuadratureOptions {
  int initial_grid = 4096;  // intervals per common period
  int max_grid = 65536;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
};

/// Iterated-integral integrands sampled on a uniform grid over one common
/// period in the tau scale. Nested integrals are cumulative prefix integrals,
/// so every family costs O(N) per multi-index.
class CoefficientGrid {
 public:
  CoefficientGrid(const ControlAffineSystem& sys, int intervals);

  int intervals() const { return N_; }
  double period() const { return Tp_; }

  /// Period-average values without the omega power.
  double nu2(int j1, int j2);
  double nu3(int j1, int j2, int j3);
  double beta1(int j1, int j2, int j3, int j4);
  double beta2(int j1, int j2, int j3, int j4);
  double value(Family f, const std::vector<int>& idx);

 private:
  const ControlAffineSystem& sys_;
  int N_;
  double Tp_, h_;
  std::vector<std::vector<double>> u_, U_;
  std::map<std::pair<int, int>, std::vector<double>> a1_, a2_;
  std::map<std::tuple<int, int, int>, std::vector<double>> P_, Q_;

  const std::vector<double>& alpha1(int a, int b);
  const std::vector<double>& alpha2(int a, int b);
  const std::vector<double>& P(int a, int b, int e);
  const std::vector<double>& Q(int a, int b, int l);
};

double omega_exponent(const ControlAffineSystem& sys, const std::vector<int>& idx);

/// Runs value_at(N) for N, 2N, ... until successive values agree.
Coefficient converge(Family f, const std::vector<int>& idx, double exponent,
                     const std::function<double(int)>& value_at, const QuadratureOptions& opt);

Coefficient nu2(const ControlAffineSystem& sys, int j1, int j2, const QuadratureOptions& opt = {});
Coefficient nu3(const ControlAffineSystem& sys, int j1, int j2, int j3, const QuadratureOptions& opt = {});
Coefficient beta(const ControlAffineSystem& sys, Family family, int j1, int j2, int j3, int j4,
                 const QuadratureOptions& opt = {});

/// Second-order LBS coefficients of the earlier literature, evaluated in the
/// t scale at sys.omega(). The stored value is divided by omega^exponent.
double nu2_legacy_at(const ControlAffineSystem& sys, int i, int j, int intervals);
double nu3_legacy_at(const ControlAffineSystem& sys, int i, int j, int k, int intervals);
Coefficient nu2_legacy(const ControlAffineSystem& sys, int i, int j, const QuadratureOptions& opt = {});
Coefficient nu3_legacy(const ControlAffineSystem& sys, int i, int j, int k, const QuadratureOptions& opt = {});

class CoefficientTable {
 public:
  CommonPeriod period;
  int grid = 0;  // largest grid used
  std::vector<Coefficient> entries;

  const Coefficient* find(Family f, const std::vector<int>& idx) const;
  const Coefficient& at(Family f, const std::vector<int>& idx) const;
  bool all_converged() const;
  /// CSV: family,indices,value,omega_exponent,class,converged
  void write_csv(std::ostream& os) const;
};

/// Coefficients of every multi-index in enumerate_brackets(m, r).
CoefficientTable build_table(const ControlAffineSystem& sys, int r, const QuadratureOptions& opt = {});

/// Formats a double with up to 15 significant digits ("0.5", "2", "-1.25e-07").
std::string format_coefficient(double v);

}  // namespace lieavg
