#include "lieavg/rational.hpp"

#include <cctype>
#include <numbers>
#include <numeric>

#include "lieavg/errors.hpp"

namespace lieavg {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw ConfigError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

std::string Rational::str() const { return std::to_string(num) + "/" + std::to_string(den); }

Rational Rational::parse(const std::string& text) {
  auto digits = [&](const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  bool neg = !t.empty() && t[0] == '-';
  if (neg) t.erase(0, 1);
  auto slash = t.find('/');
  auto dot = t.find('.');
  try {
    if (slash != std::string::npos) {
      std::string a = t.substr(0, slash), b = t.substr(slash + 1);
      if (digits(a) && digits(b)) return Rational(neg ? -std::stoll(a) : std::stoll(a), std::stoll(b));
    } else if (dot != std::string::npos) {
      std::string a = t.substr(0, dot), b = t.substr(dot + 1);
      if ((a.empty() || digits(a)) && digits(b) && b.size() <= 12) {
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < b.size(); ++i) scale *= 10;
        std::int64_t v = (a.empty() ? 0 : std::stoll(a)) * scale + std::stoll(b);
        return Rational(neg ? -v : v, scale);
      }
    } else if (digits(t)) {
      return Rational(neg ? -std::stoll(t) : std::stoll(t), 1);
    }
  } catch (const std::out_of_range&) {
  }
  throw ConfigError("malformed rational '" + text + "'");
}

CommonPeriod common_period(const std::vector<Rational>& k) {
  if (k.empty()) throw ConfigError("common period of an empty frequency list");
  std::int64_t l = 1, g = 0;
  for (const auto& r : k) {
    if (r.num <= 0) throw ConfigError("frequency ratio must be positive, got " + r.str());
    Rational inv = r.inverse();
    l = std::lcm(l, inv.num);
    g = std::gcd(g, inv.den);
  }
  Rational m(l, g);
  return {m, 2.0 * std::numbers::pi * m.value()};
}

}  // namespace lieavg
