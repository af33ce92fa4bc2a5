#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dpwaves/bifurcation.hpp"
#include "dpwaves/dp_equation.hpp"
#include "dpwaves/wave_analysis.hpp"

namespace dpwaves {

struct ContinuationConfig {
  double initial_step = 1e-3;
  double min_step = 1e-7;
  double max_step = 2e-3;
  double newton_tol = 1e-10;
  int newton_max_iter = 12;
  double stop_gap = 1e-3;
  int max_points = 500;
  /// Largest |c_k| over the top 10% of modes relative to the largest
  /// non-constant |c_k|; above this the grid doubles.
  double refine_threshold = 1e-10;
  double seed_amplitude = 5e-3;
  int initial_grid = 512;
  int max_grid = 4096;
  /// Stop once mu exceeds this (the unbounded-speed alternative).
  double mu_max = std::numeric_limits<double>::infinity();

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

enum class Termination { GapReached, MaxPoints, NewtonFailure, StepUnderflow, GapIncrease, SpeedBound };

const char* to_string(Termination t);

struct BranchPoint {
  WaveState state;
  double s_arclength = 0.0;
  double gap_crest = 0.0;
  double gap_trough = 0.0;
  int newton_iters = 0;
  double crest_exponent = std::numeric_limits<double>::quiet_NaN();
};

struct Branch {
  std::vector<BranchPoint> points;
  BifurcationPoint bp;
  Termination termination = Termination::MaxPoints;
  std::string diagnostic;
};

/// sum_k w_k c_k + w_mu mu = rhs, with coefficient weights zero-padded or
/// truncated to the state's mode count.
struct LinearConstraint {
  std::vector<double> coeff_weights;
  double mu_weight = 0.0;
  double rhs = 0.0;

  double evaluate(std::span<const double> coeffs, double mu) const;
  static LinearConstraint fix_mu(double mu);
  /// mu - phi(0) = gap.
  static LinearConstraint fix_crest_gap(double gap, int n_modes);
};

/// Direction in (coefficients, mu) space, unit length in the arclength metric.
struct Tangent {
  std::vector<double> coeffs;
  double mu = 0.0;
};

/// Squared norm with Parseval weights: c_0^2 + (1/2) sum c_k^2 + mu^2.
double arclength_norm_sq(std::span<const double> coeffs, double mu);

/// The hyperplane <t, x - base> = step through the predicted point.
struct ArclengthPlane {
  std::vector<double> base_coeffs;
  double base_mu = 0.0;
  Tangent tangent;
  double step = 0.0;

  LinearConstraint constraint() const;
};

struct NewtonResult {
  WaveState state;
  int iterations = 0;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 12;
};

/// Newton on the residual augmented by one linear constraint. Throws
/// NewtonFailure on non-convergence and SingularHeight once max phi >= mu.
NewtonResult newton_correct(const WaveState& guess, const LinearConstraint& constraint,
                            const NewtonOptions& opts = {});
NewtonResult newton_correct(const WaveState& guess, const ArclengthPlane& plane,
                            const NewtonOptions& opts = {});

/// Unit secant through two accepted points. Throws DomainError if they coincide.
Tangent secant_tangent(const BranchPoint& prev, const BranchPoint& prev2);
/// Derivative of the seed family with respect to s, normalized.
Tangent model_tangent(const BifurcationPoint& bp, const LocalBranchModel& model, double s,
                      int n_modes);

/// prev + step * tangent, the tangent being the secant through prev2 when
/// given and `fallback` otherwise.
WaveState tangent_predictor(const BranchPoint& prev, const BranchPoint* prev2, double step,
                            const Tangent* fallback = nullptr);

/// Largest |c_k| over the top tenth of the modes divided by max_{k>=1} |c_k|.
double spectral_tail(const WaveState& state);

BranchPoint make_branch_point(const WaveState& state, double s_arclength, int newton_iters);

using BranchObserver = std::function<void(const BranchPoint&)>;

/// Pseudo-arclength continuation from the seed at cfg.seed_amplitude.
/// `resume_from` continues an earlier trace from its last points; the observer
/// sees each newly accepted point in order.
Branch continue_branch(const BifurcationPoint& bp, const ContinuationConfig& cfg,
                       const BranchObserver& observer = {},
                       std::vector<BranchPoint> resume_from = {});

}  // namespace dpwaves
