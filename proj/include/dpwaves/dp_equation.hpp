#pragma once

#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dpwaves/grid.hpp"

namespace dpwaves {

/// One even candidate solution of
///   -mu phi + phi^2/2 + (3/2) L(phi^2) = a
/// stored as cosine coefficients on a grid, crest at x = 0.
class WaveState {
 public:
  WaveState(PeriodicGrid grid, std::vector<double> coeffs, double mu, double a,
            double residual_norm = std::numeric_limits<double>::quiet_NaN());

  /// Projects nodal samples onto the grid's cosine modes.
  static WaveState from_field(const RealField& phi, double mu, double a);
  static WaveState constant(const PeriodicGrid& grid, double value, double mu, double a);

  const PeriodicGrid& grid() const { return grid_; }
  std::span<const double> coefficients() const { return coeffs_; }
  const std::vector<double>& coefficient_vector() const { return coeffs_; }
  int n_modes() const { return static_cast<int>(coeffs_.size()); }
  double mu() const { return mu_; }
  double a() const { return a_; }
  /// Sup-norm of the residual at acceptance; NaN until measured.
  double residual_norm() const { return residual_norm_; }

  RealField phi() const;
  double crest_value() const;   // phi(0)
  double trough_value() const;  // phi(P/2)

  WaveState with_residual_norm(double r) const;
  /// Same function on the doubled grid (zero-padded spectrum).
  WaveState refined() const;

 private:
  PeriodicGrid grid_;
  std::vector<double> coeffs_;
  double mu_;
  double a_;
  double residual_norm_;
};

/// Height of the positive constant branch, mu/4 + sqrt(mu^2 + 8a)/4.
double lambda_of_mu(double mu, double a);

/// d lambda / d mu = 1/4 + mu / (4 sqrt(mu^2 + 8a)); in [1/3, 1/2) for
/// mu >= sqrt(a), a > 0.
double lambda_prime(double mu, double a);

/// Galerkin residual mu phi - (3/2) L(phi^2) - phi^2/2 + a in cosine
/// coefficients, with phi^2 dealiased.
std::vector<double> residual_coefficients(const WaveState& state);
std::vector<double> residual_coefficients(std::span<const double> coeffs, double period,
                                          double mu, double a);

/// The Galerkin residual evaluated at the grid nodes.
RealField residual(const WaveState& state);
double residual_sup_norm(const WaveState& state);

/// Nodal residual with pointwise squares and the FFT operator.
RealField collocation_residual(const RealField& phi, double mu, double a);
/// Nodal residual given an externally computed L(phi^2).
RealField collocation_residual(const RealField& phi, const RealField& L_phi_sq,
                               double mu, double a);

/// F~(phi~, mu) = (lambda - mu) phi~ + 3 lambda L(phi~) - (3/2) L(phi~^2) - phi~^2/2,
/// equal to the residual at lambda(mu) - phi~.
RealField shifted_residual(const RealField& phi_pert, double mu, double a);

/// phi -> mu - sqrt(mu^2 + 2a - 3 L(phi^2)). Throws SingularHeight when the
/// radicand is not strictly positive somewhere.
RealField fixed_point_map(const RealField& phi, double mu, double a);

/// Dense derivative of residual_coefficients with respect to the cosine
/// coefficients: v -> (mu - phi) v - 3 L(phi v).
struct LinearOperatorRep {
  Eigen::MatrixXd matrix;
  double mu;
  double a;
};

LinearOperatorRep jacobian(const WaveState& state);
LinearOperatorRep jacobian_serial(const WaveState& state);

}  // namespace dpwaves
