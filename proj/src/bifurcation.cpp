#include "dpwaves/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "dpwaves/cosine_series.hpp"
#include "dpwaves/errors.hpp"
#include "dpwaves/operators.hpp"

namespace dpwaves {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// (2/P) int u v over a period on the uniform grid.
double l2_projection(const RealField& u, const RealField& v) {
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j) acc += u[j] * v[j];
  return 2.0 * acc / u.size();
}

RealField kernel_direction(const BifurcationPoint& bp, const PeriodicGrid& grid) {
  return RealField::sample(grid, [&](double x) { return std::cos(bp.wavenumber * x); });
}

int grid_size_for(const BifurcationPoint& bp, int n_points) {
  // Room for mode 3k (phi* psi2) below the dropped Nyquist.
  int n = std::max(n_points, 8 * bp.k + 8);
  return n + (n % 2);
}

}  // namespace

double dispersion(double mu, double a) {
  if (a < 0.0) throw DomainError("dispersion: requires a >= 0");
  const double root_a = std::sqrt(a);
  if (!(mu > root_a)) throw DomainError("dispersion: requires mu > sqrt(a)");
  const double s = std::sqrt(mu * mu + 8.0 * a);  // = 4 lambda - mu
  // mu - lambda = 2 (mu^2 - a) / (3 mu + s), with mu^2 - a factored for accuracy.
  const double excess = (mu - root_a) * (mu + root_a);
  return std::sqrt(s * (3.0 * mu + s) / (2.0 * excess));
}

bool mode_is_admissible(int k, double period) {
  return k >= 1 && 2.0 * kPi * k / period > kSqrt2;
}

BifurcationPoint bifurcation_mu(int k, double period, double a) {
  if (k < 1) throw DomainError("bifurcation_mu: mode k must be positive");
  if (!(period > 0.0)) throw DomainError("bifurcation_mu: period must be positive");
  if (!(a > 0.0)) throw DomainError("bifurcation_mu: requires a > 0");
  const double target = 2.0 * kPi * k / period;
  if (!(target > kSqrt2)) {
    throw NoBifurcation("2k pi/P = " + std::to_string(target) +
                        " <= sqrt(2): mode " + std::to_string(k) + " does not bifurcate");
  }
  const double root_a = std::sqrt(a);
  double lo = root_a * (1.0 + 1e-14);
  if (dispersion(lo, a) <= target) {
    throw DomainError("bifurcation_mu: period too small to bracket the root");
  }
  double hi = 2.0 * root_a + 1.0;
  int expansions = 0;
  while (dispersion(hi, a) > target) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 1000 || !std::isfinite(hi)) {
      throw NoBifurcation("dispersion does not reach 2k pi/P; root lies beyond floating range");
    }
  }
  while (hi - lo > 1e-13 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (dispersion(mid, a) > target ? lo : hi) = mid;
  }
  // Secant polish from the final bracket.
  double x0 = lo, x1 = hi;
  double f0 = dispersion(x0, a) - target, f1 = dispersion(x1, a) - target;
  double best = std::abs(f0) < std::abs(f1) ? x0 : x1;
  double best_res = std::min(std::abs(f0), std::abs(f1));
  for (int it = 0; it < 8 && f1 != f0; ++it) {
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 > root_a) || !std::isfinite(x2)) break;
    const double f2 = dispersion(x2, a) - target;
    x0 = x1; f0 = f1; x1 = x2; f1 = f2;
    if (std::abs(f2) < best_res) {
      best_res = std::abs(f2);
      best = x2;
    }
    if (best_res == 0.0) break;
  }

  BifurcationPoint bp;
  bp.k = k;
  bp.mu_star = best;
  bp.lambda_star = lambda_of_mu(best, a);
  bp.wavenumber = target;
  bp.period = period;
  bp.a = a;
  // d'(mu) by a centered difference; the root is ill conditioned when a
  // relative change of the target moves mu by orders of magnitude more.
  const double h = 1e-6 * best;
  const double slope = (dispersion(best + h, a) - dispersion(std::max(best - h, 0.5 * (best + root_a)), a)) /
                       (best + h - std::max(best - h, 0.5 * (best + root_a)));
  const double sensitivity = std::abs(target / (best * slope));
  // Near sqrt(a) the curve is steep enough that one ulp in mu moves d by more
  // than 1e-12, so the residual is judged relative to the target.
  bp.ill_conditioned = !std::isfinite(sensitivity) || sensitivity > 1e6 ||
                       best_res > 1e-12 * std::max(1.0, target);
  return bp;
}

double mu_dot_numerator(const BifurcationPoint& bp, int n_points) {
  const PeriodicGrid grid(bp.period, grid_size_for(bp, n_points));
  const RealField phi_star = kernel_direction(bp, grid);
  const RealField sq = phi_star * phi_star;
  const RealField second = -1.0 * sq - 3.0 * apply_L(sq);
  return l2_projection(second, phi_star);
}

double mixed_derivative_projection(const BifurcationPoint& bp) {
  const double p = bp.wavenumber;
  return lambda_prime(bp.mu_star, bp.a) * (1.0 + 3.0 / (1.0 + p * p)) - 1.0;
}

double mixed_derivative_projection_grid(const BifurcationPoint& bp, int n_points) {
  const PeriodicGrid grid(bp.period, grid_size_for(bp, n_points));
  const RealField phi_star = kernel_direction(bp, grid);
  const double lp = lambda_prime(bp.mu_star, bp.a);
  const RealField mixed = (lp - 1.0) * phi_star + (3.0 * lp) * apply_L(phi_star);
  return l2_projection(mixed, phi_star);
}

double mu_dot_zero_check(const BifurcationPoint& bp, int n_points) {
  return -0.5 * mu_dot_numerator(bp, n_points) /
         mixed_derivative_projection_grid(bp, n_points);
}

RealField ShapeCorrection::field(const PeriodicGrid& grid, int k) const {
  const double p2 = 2.0 * grid.wavenumber(k);
  return RealField::sample(grid, [&](double x) {
    return constant + second_harmonic * std::cos(p2 * x);
  });
}

ShapeCorrection second_order_shape(const BifurcationPoint& bp, int n_points) {
  const double lam = bp.lambda_star;
  const double mu = bp.mu_star;
  const double pk = bp.period / bp.k;  // wavelength
  const double pi2 = kPi * kPi;

  ShapeCorrection out;
  out.constant = 2.0 / (4.0 * lam - mu);
  out.second_harmonic = (16.0 * pi2 + 4.0 * pk * pk) /
                        (2.0 * ((4.0 * lam - mu) * pk * pk + 16.0 * pi2 * (lam - mu)));

  // Linear-solve route on a grid.
  const PeriodicGrid grid(bp.period, grid_size_for(bp, n_points));
  const int m = grid.n_modes();
  const RealField phi_star = kernel_direction(bp, grid);
  const RealField sq = phi_star * phi_star;
  const RealField rhs_field = sq + 3.0 * apply_L(sq);
  std::vector<double> rhs = cosine_analysis(rhs_field.values(), m);
  rhs[static_cast<std::size_t>(bp.k)] = 0.0;  // (id - Pi)

  // D_phi F~[0, mu*] = -D_phi F[lambda*, mu*]; the kernel row/column is
  // replaced by the identity to pin psi2 orthogonal to phi*.
  Eigen::MatrixXd a = -jacobian(WaveState::constant(grid, lam, mu, bp.a)).matrix;
  a.row(bp.k).setZero();
  a.col(bp.k).setZero();
  a(bp.k, bp.k) = 1.0;
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), m);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw InternalError("second_order_shape: singular linearization off the kernel");
  }
  const Eigen::VectorXd x = lu.solve(b);
  out.solved.assign(x.data(), x.data() + m);

  std::vector<double> closed(static_cast<std::size_t>(m), 0.0);
  closed[0] = out.constant;
  closed[static_cast<std::size_t>(2 * bp.k)] = out.second_harmonic;
  for (int j = 0; j < m; ++j) {
    out.route_discrepancy = std::max(out.route_discrepancy,
                                     std::abs(closed[static_cast<std::size_t>(j)] -
                                              out.solved[static_cast<std::size_t>(j)]));
  }
  const double scale = std::max({1.0, std::abs(out.constant), std::abs(out.second_harmonic)});
  if (out.route_discrepancy > 1e-8 * scale) {
    throw InternalError("second_order_shape: closed form and linear solve disagree by " +
                        std::to_string(out.route_discrepancy));
  }
  return out;
}

double cubic_projection_symbolic(const BifurcationPoint& bp) {
  const ShapeCorrection psi2 = second_order_shape(bp);
  // phi* psi2 = c0 cos(px) + (c2/2)(cos(px) + cos(3px))
  const double c = psi2.constant + 0.5 * psi2.second_harmonic;
  const double p = bp.wavenumber;
  return c * (1.0 + 3.0 / (1.0 + p * p));
}

double cubic_projection_grid(const BifurcationPoint& bp, int n_points) {
  const ShapeCorrection psi2 = second_order_shape(bp, n_points);
  const PeriodicGrid grid(bp.period, grid_size_for(bp, n_points));
  const RealField phi_star = kernel_direction(bp, grid);
  const RealField psi_field(grid, cosine_synthesis(psi2.solved, grid.size()));
  const RealField prod = phi_star * psi_field;
  return l2_projection(prod + 3.0 * apply_L(prod), phi_star);
}

double mu_ddot(const BifurcationPoint& bp) {
  const double third = -3.0 * cubic_projection_symbolic(bp);  // <D^3 Phi, phi*>
  return -third / (3.0 * mixed_derivative_projection(bp));
}

void translate_half_wavelength(std::vector<double>& coeffs, int k) {
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const int mode = static_cast<int>(j);
    if (mode % k == 0) {
      if ((mode / k) % 2 == 1) coeffs[j] = -coeffs[j];
    } else if (coeffs[j] != 0.0) {
      throw InternalError("translate_half_wavelength: mode " + std::to_string(mode) +
                          " is not a multiple of k");
    }
  }
}

WaveState seed_state(const BifurcationPoint& bp, const LocalBranchModel& model, double s,
                     const PeriodicGrid& grid) {
  if (2 * bp.k >= grid.n_modes()) {
    throw DomainError("seed_state: grid too coarse for mode " + std::to_string(bp.k));
  }
  if (std::abs(grid.period() - bp.period) > 1e-14 * bp.period) {
    throw DomainError("seed_state: grid period differs from the bifurcation point");
  }
  const double mu = bp.mu_star + 0.5 * s * s * model.mu_ddot;
  std::vector<double> c(static_cast<std::size_t>(grid.n_modes()), 0.0);
  c[0] = lambda_of_mu(mu, bp.a) - 0.5 * s * s * model.psi2.constant;
  c[static_cast<std::size_t>(bp.k)] = -s;
  c[static_cast<std::size_t>(2 * bp.k)] = -0.5 * s * s * model.psi2.second_harmonic;
  translate_half_wavelength(c, bp.k);
  return {grid, std::move(c), mu, bp.a};
}

double seed_validity_radius(const BifurcationPoint& bp, double mu_ddot_value,
                            const ShapeCorrection& psi2) {
  const PeriodicGrid grid(bp.period, grid_size_for(bp, 64));
  LocalBranchModel model{mu_ddot_value, psi2, 0.0};
  const double start = bp.mu_star - bp.lambda_star;
  for (int j = 0; j <= 120; ++j) {
    const double s = start * std::pow(2.0, -0.25 * j);
    const WaveState seed = seed_state(bp, model, s, grid);
    const RealField phi = seed.phi();
    const double height = phi.max() - phi.min();
    if (residual_sup_norm(seed) < 1e-3 * height) return s;
  }
  return 0.0;
}

LocalBranchModel local_branch_model(const BifurcationPoint& bp) {
  LocalBranchModel model;
  model.mu_ddot = mu_ddot(bp);
  model.psi2 = second_order_shape(bp);
  model.validity_radius = seed_validity_radius(bp, model.mu_ddot, model.psi2);
  return model;
}

WaveState seed_state(const BifurcationPoint& bp, double s, const PeriodicGrid& grid) {
  return seed_state(bp, local_branch_model(bp), s, grid);
}

}  // namespace dpwaves
