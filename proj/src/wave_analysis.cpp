#include "dpwaves/wave_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dpwaves/cosine_series.hpp"
#include "dpwaves/errors.hpp"

namespace dpwaves {

namespace {

bool is_constant(const WaveState& s) {
  const auto c = s.coefficients();
  double tail = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) tail = std::max(tail, std::abs(c[k]));
  return tail <= 1e-14 * std::max(1.0, std::abs(c[0]));
}

// L(phi^2) at the nodes, Galerkin-consistent with the residual.
std::vector<double> L_phi_sq_nodal(const WaveState& s) {
  std::vector<double> sq = dealiased_square(s.coefficients());
  apply_L_modes(sq, s.grid().period());
  return cosine_synthesis(sq, s.grid().size());
}

CheckStatus status_from_margin(double margin, double tol) {
  return margin > tol ? CheckStatus::Pass : CheckStatus::Fail;
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::NotApplicable: return "not_applicable";
    case CheckStatus::Boundary: return "boundary";
  }
  return "unknown";
}

namespace {
CheckStatus status_from_string(const std::string& s) {
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  if (s == "not_applicable") return CheckStatus::NotApplicable;
  if (s == "boundary") return CheckStatus::Boundary;
  throw SchemaError("unknown check status '" + s + "'");
}
}  // namespace

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["overall"] = overall;
  auto& items = j["checks"] = nlohmann::json::object();
  for (const auto& c : checks) {
    items[c.name] = {{"status", to_string(c.status)},
                     {"measured", c.measured},
                     {"tolerance", c.tolerance},
                     {"anchor", c.anchor},
                     {"mandatory", c.mandatory},
                     {"detail", c.detail}};
  }
  return j;
}

VerificationReport VerificationReport::from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.overall = j.at("overall").get<bool>();
  for (const auto& [name, item] : j.at("checks").items()) {
    CheckResult c;
    c.name = name;
    c.status = status_from_string(item.at("status").get<std::string>());
    c.measured = item.at("measured").get<double>();
    c.tolerance = item.at("tolerance").get<double>();
    c.anchor = item.at("anchor").get<std::string>();
    c.mandatory = item.at("mandatory").get<bool>();
    c.detail = item.at("detail").get<std::string>();
    r.checks.push_back(std::move(c));
  }
  return r;
}

double trough_gap(const WaveState& state) { return state.mu() - state.trough_value(); }
double crest_gap(const WaveState& state) { return state.mu() - state.crest_value(); }

CheckResult check_height_sandwich(const WaveState& state, double tol) {
  CheckResult r;
  r.name = "height_sandwich";
  r.anchor = "non-constant periodic solutions satisfy min phi < (mu + sqrt(mu^2 + 8a))/4 < max phi";
  r.mandatory = true;
  r.tolerance = tol;
  if (is_constant(state)) {
    r.status = CheckStatus::NotApplicable;
    r.detail = "constant state";
    return r;
  }
  const RealField phi = state.phi();
  const double lam = lambda_of_mu(state.mu(), state.a());
  r.measured = std::min(phi.max() - lam, lam - phi.min());
  r.status = status_from_margin(r.measured, tol);
  r.detail = "margin = min(max phi - lambda, lambda - min phi)";
  return r;
}

CheckResult check_max_below_speed(const WaveState& state, double tol) {
  CheckResult r;
  r.name = "max_below_speed";
  r.anchor = "phi < mu everywhere, equivalently 3 L(phi^2) < mu^2 + 2a";
  r.mandatory = true;
  r.tolerance = tol;
  const RealField phi = state.phi();
  const double mu = state.mu();
  const auto lsq = L_phi_sq_nodal(state);
  const double speed_margin = mu - phi.max();
  const double radicand_margin =
      mu * mu + 2.0 * state.a() - 3.0 * *std::max_element(lsq.begin(), lsq.end());
  const double scale = std::max(1.0, mu * mu);
  r.measured = std::min(speed_margin, radicand_margin / scale);
  if (std::abs(speed_margin) <= tol && std::abs(radicand_margin) <= tol * scale) {
    r.status = CheckStatus::Boundary;
    r.detail = "phi reaches mu with a vanishing radicand";
  } else {
    r.status = status_from_margin(r.measured, 0.0);
    r.detail = "speed margin " + std::to_string(speed_margin) + ", radicand margin " +
               std::to_string(radicand_margin);
  }
  return r;
}

CheckResult check_monotone_half_period(const WaveState& state) {
  CheckResult r;
  r.name = "monotone_half_period";
  r.anchor = "phi' > 0 on (-P/2, 0)";
  r.mandatory = true;
  r.tolerance = 0.0;
  if (is_constant(state)) {
    r.status = CheckStatus::NotApplicable;
    r.detail = "constant state";
    return r;
  }
  const int n = state.grid().size();
  const auto d1 = cosine_derivative(state.coefficients(), state.grid().period(), n, 1);
  double worst = std::numeric_limits<double>::infinity();
  int where = -1;
  for (int j = 1; j < n / 2; ++j) {
    if (d1[static_cast<std::size_t>(j)] < worst) {
      worst = d1[static_cast<std::size_t>(j)];
      where = j;
    }
  }
  r.measured = worst;
  r.status = worst > 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
  r.detail = "smallest phi' at x = " + std::to_string(state.grid().node(where));
  return r;
}

CheckResult check_curvature_signs(const WaveState& state, double gap_floor) {
  CheckResult r;
  r.name = "curvature_signs";
  r.anchor = "phi''(0) < 0 and phi''(+-P/2) > 0";
  r.tolerance = 0.0;
  if (is_constant(state)) {
    r.status = CheckStatus::NotApplicable;
    r.detail = "constant state";
    return r;
  }
  if (crest_gap(state) < gap_floor) {
    r.status = CheckStatus::NotApplicable;
    r.detail = "crest gap below floor; second derivative unresolved";
    return r;
  }
  const auto c = state.coefficients();
  double at_crest = 0.0, at_trough = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double xi = state.grid().wavenumber(static_cast<int>(k));
    const double term = -xi * xi * c[k];
    at_crest += term;
    at_trough += (k % 2 == 0) ? term : -term;
  }
  r.measured = std::max(at_crest, -at_trough);
  r.status = r.measured < 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
  r.detail = "phi''(0) = " + std::to_string(at_crest) + ", phi''(P/2) = " + std::to_string(at_trough);
  return r;
}

CheckResult check_trough_gap(const WaveState& state) {
  CheckResult r;
  r.name = "trough_gap";
  r.anchor = "mu - phi(P/2) is bounded below by a positive constant";
  r.mandatory = true;
  r.tolerance = 0.0;
  r.measured = trough_gap(state);
  r.status = r.measured > 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckResult check_difference_identity(const WaveState& state, int n_pairs, unsigned seed) {
  CheckResult r;
  r.name = "difference_identity";
  r.anchor = "(2mu - phi(x) - phi(y))(phi(x) - phi(y)) = 3(L(phi^2)(x) - L(phi^2)(y))";
  const RealField phi = state.phi();
  const auto lsq = L_phi_sq_nodal(state);
  // Galerkin phi^2 at the nodes keeps the identity exact up to the residual.
  const auto sq = cosine_synthesis(dealiased_square(state.coefficients()), phi.size());
  const double res = residual_sup_norm(state);
  r.tolerance = 4.0 * res + 1e-12 * std::max(1.0, state.mu() * state.mu());
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(0, phi.size() - 1);
  const double mu = state.mu();
  double worst = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    const auto x = static_cast<std::size_t>(pick(rng));
    const auto y = static_cast<std::size_t>(pick(rng));
    const double lhs = 2.0 * mu * (phi[static_cast<int>(x)] - phi[static_cast<int>(y)]) -
                       (sq[x] - sq[y]);
    worst = std::max(worst, std::abs(lhs - 3.0 * (lsq[x] - lsq[y])));
  }
  r.measured = worst;
  r.status = worst <= r.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CrestFit crest_exponent(const RealField& phi) {
  const PeriodicGrid& g = phi.grid();
  const int origin = g.origin_index();
  const double h = g.spacing();
  const double r_min = 4.0 * h;
  const double r_max = g.period() / 8.0;
  const double top = phi[origin];
  std::vector<double> lx, ly;
  for (int j = origin + 1; j < g.size(); ++j) {
    const double x = g.node(j);
    if (x < r_min * (1.0 - 1e-12)) continue;
    if (x > r_max * (1.0 + 1e-12)) break;
    const double drop = top - phi[j];
    if (!(drop > 0.0)) continue;
    lx.push_back(std::log(x));
    ly.push_back(std::log(drop));
  }
  const auto n = static_cast<int>(lx.size());
  if (n < 6) {
    throw WindowTooSmall("crest fit window holds " + std::to_string(n) + " nodes, need 6");
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += lx[static_cast<std::size_t>(i)];
    my += ly[static_cast<std::size_t>(i)];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = lx[static_cast<std::size_t>(i)] - mx;
    const double dy = ly[static_cast<std::size_t>(i)] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  CrestFit fit;
  fit.exponent = sxy / sxx;
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  fit.n_nodes = n;
  return fit;
}

CrestFit crest_exponent(const WaveState& state) {
  if (is_constant(state)) throw DomainError("crest_exponent: constant state");
  return crest_exponent(state.phi());
}

VerificationReport verify(const WaveState& state, const VerifyOptions& opts) {
  VerificationReport rep;
  rep.checks.push_back(check_height_sandwich(state, opts.tol));
  rep.checks.push_back(check_max_below_speed(state, opts.tol));
  rep.checks.push_back(check_monotone_half_period(state));
  rep.checks.push_back(check_trough_gap(state));
  rep.checks.push_back(check_curvature_signs(state, opts.gap_floor));
  rep.checks.push_back(check_difference_identity(state));
  for (const auto& c : rep.checks) {
    if (c.mandatory && !c.acceptable()) rep.overall = false;
  }
  return rep;
}

nlohmann::json BranchVerification::to_json() const {
  nlohmann::json j;
  j["overall"] = overall;
  j["n_points"] = points.size();
  j["failing_points"] = failing_points;
  j["min_trough_gap"] = min_trough_gap;
  return j;
}

BranchVerification verify(const std::vector<WaveState>& states, const VerifyOptions& opts) {
  BranchVerification out;
  out.min_trough_gap = std::numeric_limits<double>::infinity();
  for (const auto& s : states) {
    out.points.push_back(verify(s, opts));
    if (!out.points.back().overall) ++out.failing_points;
    out.min_trough_gap = std::min(out.min_trough_gap, trough_gap(s));
  }
  out.overall = out.failing_points == 0 && !states.empty() && out.min_trough_gap > 0.0;
  return out;
}

double cuspon_pairing(const RealLineSamples& s) {
  const int m = s.cells_per_side;
  if (m < 2 || m % 2 != 0) throw DomainError("cuspon_pairing: cells per side must be even and >= 2");
  if (static_cast<int>(s.d1.size()) != s.size() || static_cast<int>(s.d3.size()) != s.size()) {
    throw DomainError("cuspon_pairing: sample arrays do not match the grid");
  }
  double scale = 0.0;
  for (int j = 0; j < s.size(); ++j) {
    const auto i = static_cast<std::size_t>(j);
    scale = std::max({scale, std::abs(s.d1[i]), std::abs(s.d3[i])});
    if (!s.d0.empty()) scale = std::max(scale, std::abs(s.d0[i]));
  }
  const auto edge = [&](std::size_t i) {
    double v = std::max(std::abs(s.d1[i]), std::abs(s.d3[i]));
    if (!s.d0.empty()) v = std::max(v, std::abs(s.d0[i]));
    return v;
  };
  const auto last = static_cast<std::size_t>(s.size() - 1);
  if (std::max(edge(0), edge(last)) > 1e-12 * std::max(scale, 1e-300)) {
    throw DomainError("cuspon_pairing: test function support exceeds the sampled domain");
  }
  const double h = s.spacing();
  const auto integrand = [&](int j) {
    const double x = s.node(j);
    const auto i = static_cast<std::size_t>(j);
    return -std::expm1(-2.0 * std::abs(x)) * (0.5 * s.d3[i] - 2.0 * s.d1[i]);
  };
  // Simpson on [-W, 0] and [0, W]; u^2 has a corner at 0.
  double total = 0.0;
  for (int side = 0; side < 2; ++side) {
    const int j0 = side * m;
    double acc = integrand(j0) + integrand(j0 + m);
    for (int i = 1; i < m; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * integrand(j0 + i);
    total += acc * h / 3.0;
  }
  return total;
}

}  // namespace dpwaves
