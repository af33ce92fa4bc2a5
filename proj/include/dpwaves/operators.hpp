#pragma once

#include "dpwaves/grid.hpp"

namespace dpwaves {

/// L = (1 - d^2/dx^2)^{-1} as the Fourier multiplier 1/(1 + xi_k^2) applied
/// to the DFT of the samples.
RealField apply_L(const RealField& f);

enum class QuadratureRule {
  /// Periodic trapezoid sum h sum_j K_P(x_i - x_j) f_j. Second order: the
  /// kernel has a derivative jump at the diagonal.
  Trapezoid,
  /// Trapezoid plus the Euler-Maclaurin term of the diagonal corner, built from
  /// the one-sided limits of K_P' at 0. Fourth order.
  CornerCorrected,
};

/// L f(x_i) = int_{-P/2}^{P/2} K_P(x_i - y) f(y) dy by direct quadrature with
/// the closed-form periodic kernel. Independent of the FFT path.
RealField apply_L_quadrature(const RealField& f,
                             QuadratureRule rule = QuadratureRule::CornerCorrected);
RealField apply_L_quadrature_serial(
    const RealField& f, QuadratureRule rule = QuadratureRule::CornerCorrected);

}  // namespace dpwaves
