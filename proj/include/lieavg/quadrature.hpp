#pragma once

#include <span>
#include <vector>

namespace lieavg {

/// Running integral F[i] = int_{x0}^{x_i} f on a uniform grid of N+1 samples
/// (N >= 5 intervals). Each interval uses the 6-point Lagrange rule, so every
/// node is accurate to O(h^6).
std::vector<double> cumulative_integral(std::span<const double> f, double h);
void cumulative_integral(std::span<const double> f, double h, std::span<double> out);

/// Integral over the whole grid with the same rule.
double integral(std::span<const double> f, double h);

}  // namespace lieavg
