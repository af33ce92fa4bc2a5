#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/differentiation/autodiff.hpp>

#include "dpwaves/dp_equation.hpp"
#include "dpwaves/grid.hpp"
#include "json.hpp"

namespace dpwaves {

enum class CheckStatus { Pass, Fail, NotApplicable, Boundary };

const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::NotApplicable;
  double measured = 0.0;
  double tolerance = 0.0;
  /// The property being checked, in words.
  std::string anchor;
  bool mandatory = false;
  std::string detail;

  /// Fail is the only status that breaks a conjunction.
  bool acceptable() const { return status != CheckStatus::Fail; }
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool overall = true;

  const CheckResult* find(const std::string& name) const;
  nlohmann::json to_json() const;
  static VerificationReport from_json(const nlohmann::json& j);
};

/// min phi < lambda(mu) < max phi with both margins above tol.
CheckResult check_height_sandwich(const WaveState& state, double tol = 1e-12);
/// phi < mu at every node and 3 max L(phi^2) < mu^2 + 2a. Equality within tol
/// on both counts is reported as Boundary.
CheckResult check_max_below_speed(const WaveState& state, double tol = 1e-12);
/// phi' > 0 at every node strictly inside (-P/2, 0).
CheckResult check_monotone_half_period(const WaveState& state);
/// phi''(0) < 0 < phi''(P/2); NotApplicable for constants and when the crest
/// gap is below gap_floor.
CheckResult check_curvature_signs(const WaveState& state, double gap_floor);
/// mu - phi(P/2) > 0.
CheckResult check_trough_gap(const WaveState& state);
/// (2mu - phi(x) - phi(y))(phi(x) - phi(y)) = 3(L(phi^2)(x) - L(phi^2)(y)) on
/// random node pairs, up to 4 times the residual.
CheckResult check_difference_identity(const WaveState& state, int n_pairs = 200,
                                      unsigned seed = 7);

double trough_gap(const WaveState& state);
double crest_gap(const WaveState& state);

struct CrestFit {
  double exponent = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double r2 = 0.0;
  int n_nodes = 0;
};

/// Least-squares slope of log(phi(0) - phi(x)) against log|x| over the nodes
/// with 4h <= x <= P/8. Throws WindowTooSmall with fewer than 6 usable nodes.
CrestFit crest_exponent(const RealField& phi);
CrestFit crest_exponent(const WaveState& state);

struct VerifyOptions {
  double gap_floor = 1e-8;  // curvature check cutoff
  double tol = 1e-12;
};

VerificationReport verify(const WaveState& state, const VerifyOptions& opts = {});

struct BranchVerification {
  std::vector<VerificationReport> points;
  double min_trough_gap = 0.0;
  std::size_t failing_points = 0;
  bool overall = true;
  nlohmann::json to_json() const;
};

BranchVerification verify(const std::vector<WaveState>& states, const VerifyOptions& opts = {});

/// First and third derivatives of a test function sampled on a symmetric
/// uniform grid over [-half_width, half_width]; x = 0 is a node.
struct RealLineSamples {
  double half_width = 0.0;
  int cells_per_side = 0;
  std::vector<double> d0;
  std::vector<double> d1;
  std::vector<double> d3;

  double spacing() const { return half_width / cells_per_side; }
  int size() const { return 2 * cells_per_side + 1; }
  double node(int j) const { return -half_width + j * spacing(); }
};

/// int (1 - e^{-2|x|}) (phi'''/2 - 2 phi') dx by composite Simpson on each
/// half line. Throws DomainError if the test function has not decayed at the
/// ends of the domain.
double cuspon_pairing(const RealLineSamples& samples);

/// Samples f, f', f''' by forward-mode automatic differentiation.
template <class F>
RealLineSamples sample_test_function(F&& f, double half_width, int cells_per_side) {
  RealLineSamples out;
  out.half_width = half_width;
  out.cells_per_side = cells_per_side;
  const int n = out.size();
  out.d0.resize(static_cast<std::size_t>(n));
  out.d1.resize(static_cast<std::size_t>(n));
  out.d3.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double xj = j == cells_per_side ? 0.0 : out.node(j);
    auto x = boost::math::differentiation::make_fvar<double, 3>(xj);
    auto y = f(x);
    const auto idx = static_cast<std::size_t>(j);
    out.d0[idx] = y.derivative(0);
    out.d1[idx] = y.derivative(1);
    out.d3[idx] = y.derivative(3);
  }
  return out;
}

struct CusponCase {
  std::string name;
  bool odd = false;
  /// 2 phi'(0), known in closed form.
  double expected = 0.0;
  RealLineSamples samples;
};

/// Five odd and five even rapidly decaying test functions.
std::vector<CusponCase> cuspon_test_suite(double half_width = 12.0, int cells_per_side = 4000);

}  // namespace dpwaves
