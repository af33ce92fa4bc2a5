#include "dpwaves/dp_equation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpwaves/compute_kernels.hpp"
#include "dpwaves/cosine_series.hpp"
#include "dpwaves/errors.hpp"
#include "dpwaves/operators.hpp"

namespace dpwaves {

WaveState::WaveState(PeriodicGrid grid, std::vector<double> coeffs, double mu,
                     double a, double residual_norm)
    : grid_(grid), coeffs_(std::move(coeffs)), mu_(mu), a_(a),
      residual_norm_(residual_norm) {
  if (static_cast<int>(coeffs_.size()) != grid_.n_modes()) {
    throw DomainError("wave state needs " + std::to_string(grid_.n_modes()) +
                      " cosine coefficients, got " + std::to_string(coeffs_.size()));
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw DomainError("wave state has non-finite coefficients");
  }
  if (!std::isfinite(mu) || !std::isfinite(a)) {
    throw DomainError("wave state has non-finite parameters");
  }
}

WaveState WaveState::from_field(const RealField& phi, double mu, double a) {
  return {phi.grid(), cosine_analysis(phi.values(), phi.grid().n_modes()), mu, a};
}

WaveState WaveState::constant(const PeriodicGrid& grid, double value, double mu,
                              double a) {
  std::vector<double> c(static_cast<std::size_t>(grid.n_modes()), 0.0);
  c[0] = value;
  return {grid, std::move(c), mu, a};
}

RealField WaveState::phi() const {
  return {grid_, cosine_synthesis(coeffs_, grid_.size())};
}

double WaveState::crest_value() const {
  double s = 0.0;
  for (double c : coeffs_) s += c;
  return s;
}

double WaveState::trough_value() const {
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) s += (k % 2 == 0 ? 1.0 : -1.0) * coeffs_[k];
  return s;
}

WaveState WaveState::with_residual_norm(double r) const {
  WaveState out = *this;
  out.residual_norm_ = r;
  return out;
}

WaveState WaveState::refined() const {
  std::vector<double> c = coeffs_;
  c.resize(2 * c.size(), 0.0);
  return {grid_.refined(), std::move(c), mu_, a_, residual_norm_};
}

double lambda_of_mu(double mu, double a) {
  const double disc = mu * mu + 8.0 * a;
  if (disc < 0.0) {
    throw DomainError("lambda_of_mu: mu^2 + 8a < 0, no real constant solutions");
  }
  return 0.25 * mu + 0.25 * std::sqrt(disc);
}

double lambda_prime(double mu, double a) {
  if (!(a > 0.0)) throw DomainError("lambda_prime: requires a > 0");
  if (mu < std::sqrt(a)) throw DomainError("lambda_prime: requires mu >= sqrt(a)");
  return 0.25 + mu / (4.0 * std::sqrt(mu * mu + 8.0 * a));
}

std::vector<double> residual_coefficients(std::span<const double> coeffs, double period,
                                          double mu, double a) {
  std::vector<double> sq = dealiased_square(coeffs);
  std::vector<double> l_sq = sq;
  apply_L_modes(l_sq, period);
  std::vector<double> r(coeffs.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    r[k] = mu * coeffs[k] - 1.5 * l_sq[k] - 0.5 * sq[k];
  }
  if (!r.empty()) r[0] += a;
  return r;
}

std::vector<double> residual_coefficients(const WaveState& state) {
  return residual_coefficients(state.coefficients(), state.grid().period(), state.mu(),
                               state.a());
}

RealField residual(const WaveState& state) {
  return {state.grid(), cosine_synthesis(residual_coefficients(state), state.grid().size())};
}

double residual_sup_norm(const WaveState& state) { return residual(state).sup_norm(); }

RealField collocation_residual(const RealField& phi, const RealField& L_phi_sq,
                               double mu, double a) {
  std::vector<double> r(phi.data());
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double p = phi.data()[j];
    r[j] = mu * p - 1.5 * L_phi_sq.data()[j] - 0.5 * p * p + a;
  }
  return {phi.grid(), std::move(r)};
}

RealField collocation_residual(const RealField& phi, double mu, double a) {
  return collocation_residual(phi, apply_L(phi * phi), mu, a);
}

RealField shifted_residual(const RealField& phi_pert, double mu, double a) {
  const double lam = lambda_of_mu(mu, a);
  const RealField l_pert = apply_L(phi_pert);
  const RealField l_sq = apply_L(phi_pert * phi_pert);
  std::vector<double> r(phi_pert.data());
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double p = phi_pert.data()[j];
    r[j] = (lam - mu) * p + 3.0 * lam * l_pert.data()[j] - 1.5 * l_sq.data()[j] - 0.5 * p * p;
  }
  return {phi_pert.grid(), std::move(r)};
}

RealField fixed_point_map(const RealField& phi, double mu, double a) {
  const RealField l_sq = apply_L(phi * phi);
  std::vector<double> out(phi.data());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double radicand = mu * mu + 2.0 * a - 3.0 * l_sq.data()[j];
    if (!(radicand > 0.0)) {
      throw SingularHeight("fixed_point_map: 3 L(phi^2) >= mu^2 + 2a at node " +
                           std::to_string(j));
    }
    out[j] = mu - std::sqrt(radicand);
  }
  return {phi.grid(), std::move(out)};
}

namespace {

LinearOperatorRep assemble(const WaveState& state, Eigen::MatrixXd product) {
  const int m = state.n_modes();
  // (mu - phi) v - 3 L(phi v): columns of -T scaled by (1 + 3 m_k) on row k.
  for (int k = 0; k < m; ++k) {
    const double xi = state.grid().wavenumber(k);
    product.row(k) *= -(1.0 + 3.0 / (1.0 + xi * xi));
  }
  product.diagonal().array() += state.mu();
  return {std::move(product), state.mu(), state.a()};
}

}  // namespace

LinearOperatorRep jacobian(const WaveState& state) {
  return assemble(state, kernels::product_matrix(state.coefficients()));
}

LinearOperatorRep jacobian_serial(const WaveState& state) {
  return assemble(state, kernels::product_matrix_serial(state.coefficients()));
}

}  // namespace dpwaves
