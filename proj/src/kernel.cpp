#include "dpwaves/kernel.hpp"

#include <cmath>

#include "dpwaves/errors.hpp"

namespace dpwaves {

double kernel_K(double x) { return 0.5 * std::exp(-std::abs(x)); }

double reduce_to_period(double x, double period) {
  double r = std::fmod(x + 0.5 * period, period);
  if (r < 0.0) r += period;
  return r - 0.5 * period;
}

double kernel_K_P(double x, double period) {
  if (!(period > 0.0)) throw DomainError("kernel_K_P: period must be positive");
  const double r = reduce_to_period(x, period);
  return 0.5 * std::exp(-std::abs(r)) + std::cosh(r) / std::expm1(period);
}

}  // namespace dpwaves
