#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lieavg {

/// Exact positive-or-negative rational with normalized sign and gcd.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Rational inverse() const { return {den, num}; }
  std::string str() const;  // "num/den"

  /// Accepts "p", "p/q" or a terminating decimal such as "0.25".
  static Rational parse(const std::string& text);

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Common period in units of 2*pi: LCM of the inverse frequency ratios.
/// The rational LCM is LCM(numerators) / GCD(denominators).
struct CommonPeriod {
  Rational multiple;  // T' = 2*pi * multiple
  double value;       // T' in radians
};

CommonPeriod common_period(const std::vector<Rational>& k);

}  // namespace lieavg
