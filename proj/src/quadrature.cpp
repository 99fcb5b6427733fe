#include "lieavg/quadrature.hpp"

#include "lieavg/errors.hpp"

namespace lieavg {

namespace {

constexpr double kFirst[6] = {475, 1427, -798, 482, -173, 27};
constexpr double kSecond[6] = {-27, 637, 1022, -258, 77, -11};
constexpr double kCentral[6] = {11, -93, 802, 802, -93, 11};

double dot6(const double* w, const double* f) {
  return w[0] * f[0] + w[1] * f[1] + w[2] * f[2] + w[3] * f[3] + w[4] * f[4] + w[5] * f[5];
}

double dot6_reversed(const double* w, const double* f) {
  return w[5] * f[0] + w[4] * f[1] + w[3] * f[2] + w[2] * f[3] + w[1] * f[4] + w[0] * f[5];
}

}  // namespace

void cumulative_integral(std::span<const double> f, double h, std::span<double> out) {
  const std::size_t np = f.size();
  if (np < 6) throw ConfigError("cumulative quadrature needs at least 5 intervals");
  if (out.size() != np) throw ConfigError("output size mismatch");
  const std::size_t N = np - 1;
  const double s = h / 1440.0;
  const double* y = f.data();
  out[0] = 0.0;
  out[1] = s * dot6(kFirst, y);
  out[2] = out[1] + s * dot6(kSecond, y);
  for (std::size_t i = 2; i + 3 <= N; ++i) out[i + 1] = out[i] + s * dot6(kCentral, y + i - 2);
  out[N - 1] = out[N - 2] + s * dot6_reversed(kSecond, y + N - 5);
  out[N] = out[N - 1] + s * dot6_reversed(kFirst, y + N - 5);
}

std::vector<double> cumulative_integral(std::span<const double> f, double h) {
  std::vector<double> out(f.size());
  cumulative_integral(f, h, out);
  return out;
}

double integral(std::span<const double> f, double h) { return cumulative_integral(f, h).back(); }

}  // namespace lieavg
