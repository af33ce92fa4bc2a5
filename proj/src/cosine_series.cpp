#include "dpwaves/cosine_series.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "dpwaves/errors.hpp"
#include "fft.hpp"

namespace dpwaves {

namespace {

using cplx = std::complex<double>;

inline double alternating(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// i^order * xi^order
cplx derivative_factor(double xi, int order) {
  static const cplx unit[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return unit[order % 4] * std::pow(xi, order);
}

std::vector<double> synthesize(std::span<const double> coeffs, int n_nodes,
                               double period, int order) {
  const int m = static_cast<int>(coeffs.size());
  if (m > n_nodes / 2) throw DomainError("cosine_synthesis: too many modes for grid");
  std::vector<cplx> half(static_cast<std::size_t>(n_nodes / 2 + 1), cplx{});
  half[0] = order == 0 ? cplx{coeffs.empty() ? 0.0 : coeffs[0], 0.0} : cplx{};
  for (int k = 1; k < m; ++k) {
    const double xi = 2.0 * std::numbers::pi * k / period;
    half[static_cast<std::size_t>(k)] =
        0.5 * coeffs[static_cast<std::size_t>(k)] * alternating(k) * derivative_factor(xi, order);
  }
  std::vector<double> out(static_cast<std::size_t>(n_nodes));
  detail::irfft(half, out);
  return out;
}

}  // namespace

int padded_size(int n_modes) {
  const int n = 3 * n_modes;
  return n + (n % 2);
}

std::vector<double> cosine_synthesis(std::span<const double> coeffs, int n_nodes) {
  return synthesize(coeffs, n_nodes, 1.0, 0);
}

std::vector<double> cosine_derivative(std::span<const double> coeffs, double period,
                                      int n_nodes, int order) {
  if (order < 0) throw DomainError("derivative order must be non-negative");
  return synthesize(coeffs, n_nodes, period, order);
}

std::vector<double> cosine_analysis(std::span<const double> values, int n_modes) {
  const int n = static_cast<int>(values.size());
  if (n_modes > n / 2) throw DomainError("cosine_analysis: too many modes for grid");
  std::vector<cplx> spec(static_cast<std::size_t>(n / 2 + 1));
  detail::rfft(values, spec);
  std::vector<double> c(static_cast<std::size_t>(n_modes));
  if (n_modes == 0) return c;
  c[0] = spec[0].real() / n;
  for (int k = 1; k < n_modes; ++k) {
    c[static_cast<std::size_t>(k)] = 2.0 * spec[static_cast<std::size_t>(k)].real() * alternating(k) / n;
  }
  return c;
}

std::vector<double> dealiased_product(std::span<const double> a,
                                      std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("dealiased_product: size mismatch");
  const int m = static_cast<int>(a.size());
  const int n = padded_size(m);
  std::vector<double> fa = cosine_synthesis(a, n);
  const std::vector<double> fb = cosine_synthesis(b, n);
  for (std::size_t j = 0; j < fa.size(); ++j) fa[j] *= fb[j];
  return cosine_analysis(fa, m);
}

std::vector<double> dealiased_square(std::span<const double> coeffs) {
  const int m = static_cast<int>(coeffs.size());
  const int n = padded_size(m);
  std::vector<double> f = cosine_synthesis(coeffs, n);
  for (double& v : f) v *= v;
  return cosine_analysis(f, m);
}

double cosine_eval(std::span<const double> coeffs, double period, double x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    acc += coeffs[k] * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) * x / period);
  }
  return acc;
}

void apply_L_modes(std::span<double> coeffs, double period) {
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double xi = 2.0 * std::numbers::pi * static_cast<double>(k) / period;
    coeffs[k] /= 1.0 + xi * xi;
  }
}

double mean_square_inner(std::span<const double> a, std::span<const double> b) {
  const std::size_t m = std::min(a.size(), b.size());
  if (m == 0) return 0.0;
  double acc = a[0] * b[0];
  for (std::size_t k = 1; k < m; ++k) acc += 0.5 * a[k] * b[k];
  return acc;
}

}  // namespace dpwaves
