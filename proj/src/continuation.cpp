#include "dpwaves/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <spdlog/spdlog.h>
#include <Eigen/Dense>

#include "dpwaves/cosine_series.hpp"
#include "dpwaves/errors.hpp"

namespace dpwaves {

namespace {

std::vector<double> padded(std::span<const double> c, int m) {
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  std::copy_n(c.begin(), std::min<std::size_t>(c.size(), out.size()), out.begin());
  return out;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void normalize(Tangent& t) {
  const double n = std::sqrt(arclength_norm_sq(t.coeffs, t.mu));
  if (!(n > 1e-300) || !std::isfinite(n)) {
    throw DomainError("degenerate tangent: the direction has zero length");
  }
  for (double& c : t.coeffs) c /= n;
  t.mu /= n;
}

bool passes_gate(const WaveState& s, std::string* why) {
  for (const CheckResult& c : {check_height_sandwich(s), check_max_below_speed(s),
                               check_monotone_half_period(s), check_trough_gap(s)}) {
    if (!c.acceptable()) {
      if (why) *why = c.name + " failed (" + c.detail + ")";
      return false;
    }
  }
  return true;
}

}  // namespace

void ContinuationConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  need(min_step > 0.0 && std::isfinite(min_step), "min_step must be positive");
  need(max_step > 0.0 && std::isfinite(max_step), "max_step must be positive");
  need(min_step <= initial_step && initial_step <= max_step,
       "steps must satisfy min_step <= initial_step <= max_step");
  need(newton_tol > 0.0 && std::isfinite(newton_tol), "newton_tol must be positive");
  need(newton_max_iter > 0, "newton_max_iter must be positive");
  need(stop_gap > 0.0 && std::isfinite(stop_gap), "stop_gap must be positive");
  need(max_points > 0, "max_points must be positive");
  need(refine_threshold > 0.0, "refine_threshold must be positive");
  need(seed_amplitude > 0.0 && std::isfinite(seed_amplitude), "seed_amplitude must be positive");
  need(initial_grid >= 8 && initial_grid % 2 == 0, "grid must be an even integer >= 8");
  need(max_grid >= initial_grid, "max_grid must be at least the initial grid");
  need(mu_max > 0.0, "mu_max must be positive");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::GapReached: return "GapReached";
    case Termination::MaxPoints: return "MaxPoints";
    case Termination::NewtonFailure: return "NewtonFailure";
    case Termination::StepUnderflow: return "StepUnderflow";
    case Termination::GapIncrease: return "GapIncrease";
    case Termination::SpeedBound: return "SpeedBound";
  }
  return "Unknown";
}

double LinearConstraint::evaluate(std::span<const double> coeffs, double mu) const {
  double v = mu_weight * mu - rhs;
  const std::size_t n = std::min(coeffs.size(), coeff_weights.size());
  for (std::size_t k = 0; k < n; ++k) v += coeff_weights[k] * coeffs[k];
  return v;
}

LinearConstraint LinearConstraint::fix_mu(double mu) { return {{}, 1.0, mu}; }

LinearConstraint LinearConstraint::fix_crest_gap(double gap, int n_modes) {
  return {std::vector<double>(static_cast<std::size_t>(n_modes), -1.0), 1.0, gap};
}

double arclength_norm_sq(std::span<const double> coeffs, double mu) {
  double acc = mu * mu;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    acc += (k == 0 ? 1.0 : 0.5) * coeffs[k] * coeffs[k];
  }
  return acc;
}

LinearConstraint ArclengthPlane::constraint() const {
  LinearConstraint lc;
  lc.coeff_weights.resize(tangent.coeffs.size());
  double rhs = step + tangent.mu * base_mu;
  for (std::size_t k = 0; k < tangent.coeffs.size(); ++k) {
    const double w = (k == 0 ? 1.0 : 0.5) * tangent.coeffs[k];
    lc.coeff_weights[k] = w;
    if (k < base_coeffs.size()) rhs += w * base_coeffs[k];
  }
  lc.mu_weight = tangent.mu;
  lc.rhs = rhs;
  return lc;
}

NewtonResult newton_correct(const WaveState& guess, const LinearConstraint& constraint,
                            const NewtonOptions& opts) {
  const PeriodicGrid grid = guess.grid();
  const int m = guess.n_modes();
  const int n = grid.size();
  const std::vector<double> w = padded(constraint.coeff_weights, m);
  std::vector<double> c = guess.coefficient_vector();
  double mu = guess.mu();
  const double a = guess.a();

  auto check_height = [&](std::span<const double> coeffs, double speed) {
    const auto phi = cosine_synthesis(coeffs, n);
    const double top = *std::max_element(phi.begin(), phi.end());
    if (!(top < speed)) {
      throw SingularHeight("max phi = " + std::to_string(top) + " reaches mu = " +
                           std::to_string(speed));
    }
  };
  check_height(c, mu);

  for (int it = 0;; ++it) {
    const std::vector<double> g = residual_coefficients(c, grid.period(), mu, a);
    const double res = max_abs(cosine_synthesis(g, n));
    const double cval = constraint.evaluate(c, mu);
    if (!std::isfinite(res) || !std::isfinite(cval)) {
      throw NewtonFailure("non-finite residual at iteration " + std::to_string(it));
    }
    if (res < opts.tol && std::abs(cval) < opts.tol) {
      return {WaveState(grid, std::move(c), mu, a, res), it};
    }
    if (it == opts.max_iter) {
      throw NewtonFailure("no convergence in " + std::to_string(opts.max_iter) +
                          " iterations (residual " + std::to_string(res) + ")");
    }
    const WaveState current(grid, c, mu, a);
    Eigen::MatrixXd A(m + 1, m + 1);
    A.topLeftCorner(m, m) = jacobian(current).matrix;
    for (int k = 0; k < m; ++k) {
      A(k, m) = c[static_cast<std::size_t>(k)];  // d residual / d mu
      A(m, k) = w[static_cast<std::size_t>(k)];
    }
    A(m, m) = constraint.mu_weight;
    Eigen::VectorXd rhs(m + 1);
    for (int k = 0; k < m; ++k) rhs(k) = -g[static_cast<std::size_t>(k)];
    rhs(m) = -cval;
    const Eigen::VectorXd delta = A.partialPivLu().solve(rhs);
    if (!delta.allFinite()) throw NewtonFailure("singular augmented Jacobian");
    for (int k = 0; k < m; ++k) c[static_cast<std::size_t>(k)] += delta(k);
    mu += delta(m);
    check_height(c, mu);
  }
}

NewtonResult newton_correct(const WaveState& guess, const ArclengthPlane& plane,
                            const NewtonOptions& opts) {
  return newton_correct(guess, plane.constraint(), opts);
}

Tangent secant_tangent(const BranchPoint& prev, const BranchPoint& prev2) {
  const int m = prev.state.n_modes();
  const auto c1 = prev.state.coefficients();
  const auto c2 = padded(prev2.state.coefficients(), m);
  Tangent t;
  t.coeffs.resize(static_cast<std::size_t>(m));
  for (std::size_t k = 0; k < t.coeffs.size(); ++k) t.coeffs[k] = c1[k] - c2[k];
  t.mu = prev.state.mu() - prev2.state.mu();
  normalize(t);
  return t;
}

Tangent model_tangent(const BifurcationPoint& bp, const LocalBranchModel& model, double s,
                      int n_modes) {
  if (2 * bp.k >= n_modes) throw DomainError("model_tangent: too few modes");
  const double mu = bp.mu_star + 0.5 * s * s * model.mu_ddot;
  Tangent t;
  t.coeffs.assign(static_cast<std::size_t>(n_modes), 0.0);
  t.mu = s * model.mu_ddot;
  t.coeffs[0] = lambda_prime(mu, bp.a) * t.mu - s * model.psi2.constant;
  t.coeffs[static_cast<std::size_t>(bp.k)] = 1.0;  // crest frame: -cos shifted by half a wave
  t.coeffs[static_cast<std::size_t>(2 * bp.k)] = -s * model.psi2.second_harmonic;
  normalize(t);
  return t;
}

WaveState tangent_predictor(const BranchPoint& prev, const BranchPoint* prev2, double step,
                            const Tangent* fallback) {
  Tangent t;
  if (prev2 != nullptr) {
    t = secant_tangent(prev, *prev2);
  } else if (fallback != nullptr) {
    t = *fallback;
  } else {
    throw DomainError("tangent_predictor: needs a second point or a model tangent");
  }
  const int m = prev.state.n_modes();
  std::vector<double> c = prev.state.coefficient_vector();
  const auto dir = padded(t.coeffs, m);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += step * dir[k];
  return {prev.state.grid(), std::move(c), prev.state.mu() + step * t.mu, prev.state.a()};
}

double spectral_tail(const WaveState& state) {
  const auto c = state.coefficients();
  const std::size_t m = c.size();
  const std::size_t start = m - std::max<std::size_t>(1, m / 10);
  double head = 0.0, tail = 0.0;
  for (std::size_t k = 1; k < m; ++k) {
    head = std::max(head, std::abs(c[k]));
    if (k >= start) tail = std::max(tail, std::abs(c[k]));
  }
  return head > 0.0 ? tail / head : 0.0;
}

BranchPoint make_branch_point(const WaveState& state, double s_arclength, int newton_iters) {
  BranchPoint p{state, s_arclength, crest_gap(state), trough_gap(state), newton_iters};
  try {
    p.crest_exponent = crest_exponent(state).exponent;
  } catch (const Error&) {
    // Constant or under-resolved states carry NaN.
  }
  return p;
}

namespace {

struct Corrector {
  const ContinuationConfig& cfg;

  // Newton, then grid doubling while the spectrum is unresolved.
  NewtonResult operator()(const WaveState& guess, const LinearConstraint& lc) const {
    const NewtonOptions opts{cfg.newton_tol, cfg.newton_max_iter};
    NewtonResult r = newton_correct(guess, lc, opts);
    while (spectral_tail(r.state) > cfg.refine_threshold &&
           2 * r.state.grid().size() <= cfg.max_grid) {
      spdlog::debug("refining grid to {} points (tail {:.3e})", 2 * r.state.grid().size(),
                    spectral_tail(r.state));
      const int before = r.iterations;
      r = newton_correct(r.state.refined(), lc, opts);
      r.iterations += before;
    }
    return r;
  }
};

}  // namespace

Branch continue_branch(const BifurcationPoint& bp, const ContinuationConfig& cfg,
                       const BranchObserver& observer, std::vector<BranchPoint> resume_from) {
  cfg.validate();
  const LocalBranchModel model = local_branch_model(bp);
  const Corrector correct{cfg};

  Branch branch;
  branch.bp = bp;
  branch.points = std::move(resume_from);
  auto& pts = branch.points;

  auto accept = [&](BranchPoint p) {
    pts.push_back(std::move(p));
    if (observer) observer(pts.back());
    spdlog::debug("point {}: mu={:.12f} gap={:.3e} N={} iters={}", pts.size() - 1,
                  pts.back().state.mu(), pts.back().gap_crest, pts.back().state.grid().size(),
                  pts.back().newton_iters);
  };

  if (pts.empty()) {
    double s0 = cfg.seed_amplitude;
    if (s0 > model.validity_radius) {
      spdlog::warn("seed amplitude {} exceeds the local model radius {}; using the radius", s0,
                   model.validity_radius);
      s0 = model.validity_radius;
    }
    const PeriodicGrid grid(bp.period, cfg.initial_grid);
    const WaveState seed = seed_state(bp, model, s0, grid);
    const ArclengthPlane plane{seed.coefficient_vector(), seed.mu(),
                               model_tangent(bp, model, s0, seed.n_modes()), 0.0};
    std::optional<NewtonResult> first;
    try {
      first = correct(seed, plane.constraint());
    } catch (const Error& e) {
      throw NewtonFailure(std::string("first continuation step failed: ") + e.what());
    }
    std::string why;
    if (!passes_gate(first->state, &why)) {
      throw NewtonFailure("first continuation point rejected: " + why);
    }
    accept(make_branch_point(first->state, s0, first->iterations));
  }

  double step = cfg.initial_step;
  auto finished = [&]() -> bool {
    const BranchPoint& last = pts.back();
    if (last.gap_crest < cfg.stop_gap) {
      branch.termination = Termination::GapReached;
      return true;
    }
    if (last.state.mu() > cfg.mu_max) {
      branch.termination = Termination::SpeedBound;
      return true;
    }
    return false;
  };

  if (finished()) return branch;

  while (static_cast<int>(pts.size()) < cfg.max_points) {
    const BranchPoint& prev = pts.back();
    const BranchPoint* prev2 = pts.size() >= 2 ? &pts[pts.size() - 2] : nullptr;
    const Tangent t = prev2 ? secant_tangent(prev, *prev2)
                            : model_tangent(bp, model,
                                            std::abs(prev.state.coefficients()[static_cast<std::size_t>(bp.k)]),
                                            prev.state.n_modes());
    const ArclengthPlane plane{prev.state.coefficient_vector(), prev.state.mu(), t, step};
    const WaveState guess = tangent_predictor(prev, nullptr, step, &t);

    std::string why;
    std::optional<NewtonResult> r;
    bool ok = false;
    try {
      r = correct(guess, plane.constraint());
      ok = passes_gate(r->state, &why);
    } catch (const NewtonFailure& e) {
      why = e.what();
    } catch (const SingularHeight& e) {
      why = e.what();
    }
    if (!ok) {
      step *= 0.5;
      spdlog::debug("step rejected ({}); step -> {:.3e}", why, step);
      if (step < cfg.min_step) {
        branch.termination = Termination::StepUnderflow;
        branch.diagnostic = why;
        return branch;
      }
      continue;
    }
    BranchPoint next = make_branch_point(r->state, prev.s_arclength + step, r->iterations);
    if (pts.size() >= 3 && next.gap_crest > prev.gap_crest * (1.0 + 1e-9)) {
      branch.termination = Termination::GapIncrease;
      branch.diagnostic = "crest gap rose from " + std::to_string(prev.gap_crest) + " to " +
                          std::to_string(next.gap_crest);
      return branch;
    }
    accept(std::move(next));
    if (finished()) return branch;
    if (r->iterations <= 3) step = std::min(step * 1.3, cfg.max_step);
  }
  branch.termination = Termination::MaxPoints;
  return branch;
}

}  // namespace dpwaves
