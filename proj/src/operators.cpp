#include "dpwaves/operators.hpp"

#include <complex>
#include <vector>

#include "dpwaves/compute_kernels.hpp"
#include "dpwaves/kernel.hpp"
#include "fft.hpp"

namespace dpwaves {

RealField apply_L(const RealField& f) {
  const PeriodicGrid& grid = f.grid();
  const int n = grid.size();
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(n / 2 + 1));
  detail::rfft(f.values(), spec);
  for (int k = 0; k <= n / 2; ++k) {
    const double xi = grid.wavenumber(k);
    spec[static_cast<std::size_t>(k)] /= (1.0 + xi * xi) * n;
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  detail::irfft(spec, out);
  return {grid, std::move(out)};
}

namespace {

std::vector<double> quadrature_weights(const PeriodicGrid& grid, QuadratureRule rule) {
  const int n = grid.size();
  const double h = grid.spacing();
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    w[static_cast<std::size_t>(d)] = h * kernel_K_P(d * h, grid.period());
  }
  if (rule == QuadratureRule::CornerCorrected) {
    w[0] -= h * h / 12.0 * (kKernelSlopeLeft - kKernelSlopeRight);
  }
  return w;
}

}  // namespace

RealField apply_L_quadrature(const RealField& f, QuadratureRule rule) {
  const std::vector<double> w = quadrature_weights(f.grid(), rule);
  std::vector<double> out(static_cast<std::size_t>(f.size()));
  kernels::circulant_apply(w, f.values(), out);
  return {f.grid(), std::move(out)};
}

RealField apply_L_quadrature_serial(const RealField& f, QuadratureRule rule) {
  const std::vector<double> w = quadrature_weights(f.grid(), rule);
  std::vector<double> out(static_cast<std::size_t>(f.size()));
  kernels::circulant_apply_serial(w, f.values(), out);
  return {f.grid(), std::move(out)};
}

}  // namespace dpwaves
