#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dpwaves/grid.hpp"

namespace dpwaves::testing {

/// Smooth even field: exp of a short random cosine series.
inline RealField random_smooth_even(const PeriodicGrid& grid, std::mt19937& rng,
                                    int n_terms = 6) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> amp(static_cast<std::size_t>(n_terms));
  for (int k = 0; k < n_terms; ++k) amp[static_cast<std::size_t>(k)] = gauss(rng) / (1.0 + k * k);
  const double p = 2.0 * std::numbers::pi / grid.period();
  return RealField::sample(grid, [&](double x) {
    double s = 0.0;
    for (int k = 0; k < n_terms; ++k) s += amp[static_cast<std::size_t>(k)] * std::cos(k * p * x);
    return std::exp(0.5 * s);
  });
}

inline std::vector<double> random_coeffs(int m, std::mt19937& rng, double decay = 2.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) c[static_cast<std::size_t>(k)] = gauss(rng) / std::pow(1.0 + k, decay);
  return c;
}

inline double max_abs_diff(const RealField& f, const RealField& g) {
  double m = 0.0;
  for (int j = 0; j < f.size(); ++j) m = std::max(m, std::abs(f[j] - g[j]));
  return m;
}

}  // namespace dpwaves::testing
