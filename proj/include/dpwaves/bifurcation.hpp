#pragma once

#include <vector>

#include "dpwaves/dp_equation.hpp"
#include "dpwaves/grid.hpp"

namespace dpwaves {

/// sqrt((4 lambda - mu) / (mu - lambda)) on the positive constant branch.
/// Strictly decreasing on (sqrt(a), inf) with infimum sqrt(2).
double dispersion(double mu, double a);

/// A point mu_k on the constant branch where cos(2 pi k x / P) spans the
/// kernel of the linearization.
struct BifurcationPoint {
  int k = 1;
  double mu_star = 0.0;
  double lambda_star = 0.0;
  double wavenumber = 0.0;  // 2 pi k / P
  double period = 0.0;
  double a = 0.0;
  /// Root sensitivity |target / (mu d'(mu))| is huge, e.g. when
  /// 2k pi / P is within rounding of sqrt(2).
  bool ill_conditioned = false;
};

/// Unique root of dispersion(mu, a) = 2 k pi / P on (sqrt(a), inf).
/// Throws NoBifurcation when 2 k pi / P <= sqrt(2).
BifurcationPoint bifurcation_mu(int k, double period, double a);

/// Modes k <= k_max with 2 k pi / P > sqrt(2).
bool mode_is_admissible(int k, double period);

/// -(1/2) <D^2_phiphi F~(phi*,phi*), phi*> / <D^2_muphi F~ phi*, phi*>, by
/// grid quadrature. Vanishes because cos^3 integrates to zero.
double mu_dot_zero_check(const BifurcationPoint& bp, int n_points = 256);
/// Numerator of the quotient above, grid quadrature.
double mu_dot_numerator(const BifurcationPoint& bp, int n_points = 256);
/// <D^2_muphi F~[0,mu*] phi*, phi*> = lambda'(mu*) (1 + 3/(1+p^2)) - 1.
double mixed_derivative_projection(const BifurcationPoint& bp);
/// Same quantity by grid quadrature of (lambda'-1) phi* + 3 lambda' L(phi*).
double mixed_derivative_projection_grid(const BifurcationPoint& bp, int n_points = 256);

/// Second-order corrector D^2 psi[0,mu*](phi*,phi*) = c0 + c2 cos(2 p x),
/// written in the original frame (trough at x = 0).
struct ShapeCorrection {
  double constant = 0.0;         // 2 / (4 lambda* - mu*)
  double second_harmonic = 0.0;  // (16 pi^2 + 4 Pk^2) / (2((4 lambda-mu) Pk^2 + 16 pi^2 (lambda-mu)))
  /// Cosine coefficients (period P) from solving D_phi F~[0,mu*] psi2 =
  /// (id - Pi)(phi*^2 + 3 L(phi*^2)) with the dense Jacobian.
  std::vector<double> solved;
  /// max |closed form - solved| over all modes.
  double route_discrepancy = 0.0;

  RealField field(const PeriodicGrid& grid, int k) const;
};

/// Computes both routes and throws InternalError if they disagree.
ShapeCorrection second_order_shape(const BifurcationPoint& bp, int n_points = 64);

/// C (1 + 3/(1+p^2)) with C the phi* coefficient of phi* psi2 from
/// product-to-sum identities.
double cubic_projection_symbolic(const BifurcationPoint& bp);
/// <phi* psi2 + 3 L(phi* psi2), phi*> by grid quadrature using the solved psi2.
double cubic_projection_grid(const BifurcationPoint& bp, int n_points = 64);

/// mu''(0) = -(1/3) <D^3 Phi(phi*,phi*,phi*), phi*> / <D^2_muphi F~ phi*, phi*>,
/// with D^3 Phi = -3 Pi(phi* psi2 + 3 L(phi* psi2)). Never zero.
double mu_ddot(const BifurcationPoint& bp);

struct LocalBranchModel {
  double mu_ddot = 0.0;
  ShapeCorrection psi2;
  double validity_radius = 0.0;
};

LocalBranchModel local_branch_model(const BifurcationPoint& bp);

/// lambda(mu) - s phi* - (s^2/2) psi2 with mu = mu* + (s^2/2) mu''(0),
/// translated by half a wavelength so the crest sits at x = 0. The residual
/// is O(s^3).
WaveState seed_state(const BifurcationPoint& bp, double s, const PeriodicGrid& grid);
WaveState seed_state(const BifurcationPoint& bp, const LocalBranchModel& model, double s,
                     const PeriodicGrid& grid);

/// Largest s on a geometric scan with seed residual < 1e-3 (max - min of
/// the seed).
double seed_validity_radius(const BifurcationPoint& bp, double mu_ddot_value,
                            const ShapeCorrection& psi2);

/// Multiplies mode j = m k by (-1)^m: translation by P/(2k). Throws if a mode
/// that is not a multiple of k is non-zero.
void translate_half_wavelength(std::vector<double>& coeffs, int k);

}  // namespace dpwaves
