#pragma once

namespace dpwaves {

/// K(x) = e^{-|x|} / 2, the inverse transform of 1/(1+xi^2) on the line.
double kernel_K(double x);

/// Periodized kernel sum_n K(x + nP) in closed form,
/// e^{-|x|}/2 + cosh(x)/(e^P - 1), after reducing x to [-P/2, P/2].
double kernel_K_P(double x, double period);

/// One-sided limits of K_P' at the origin: K_P'(0-) = 1/2, K_P'(0+) = -1/2.
inline constexpr double kKernelSlopeLeft = 0.5;
inline constexpr double kKernelSlopeRight = -0.5;

/// Reduce x modulo P into [-P/2, P/2).
double reduce_to_period(double x, double period);

}  // namespace dpwaves
