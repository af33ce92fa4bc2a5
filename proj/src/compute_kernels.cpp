#include "dpwaves/compute_kernels.hpp"

#include <cstddef>

#include "dpwaves/errors.hpp"

namespace dpwaves::kernels {

namespace {

inline double circulant_row(std::span<const double> w, std::span<const double> f,
                            std::ptrdiff_t i) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  double acc = 0.0;
  for (std::ptrdiff_t j = 0; j <= i; ++j) acc += w[static_cast<std::size_t>(i - j)] * f[static_cast<std::size_t>(j)];
  for (std::ptrdiff_t j = i + 1; j < n; ++j) {
    acc += w[static_cast<std::size_t>(i - j + n)] * f[static_cast<std::size_t>(j)];
  }
  return acc;
}

inline double product_entry(std::span<const double> c, std::ptrdiff_t k,
                            std::ptrdiff_t q) {
  const auto m = static_cast<std::ptrdiff_t>(c.size());
  double v = 0.0;
  if (k - q >= 0) v += 0.5 * c[static_cast<std::size_t>(k - q)];
  if (k + q < m) v += 0.5 * c[static_cast<std::size_t>(k + q)];
  if (k > 0 && q - k >= 0) v += 0.5 * c[static_cast<std::size_t>(q - k)];
  return v;
}

void check_sizes(std::span<const double> w, std::span<const double> f,
                 std::span<double> out) {
  if (w.size() != f.size() || out.size() != f.size()) {
    throw DomainError("circulant_apply: size mismatch");
  }
}

}  // namespace

void circulant_apply(std::span<const double> weights, std::span<const double> f,
                     std::span<double> out) {
  check_sizes(weights, f, out);
  const auto n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = circulant_row(weights, f, i);
  }
}

void circulant_apply_serial(std::span<const double> weights,
                            std::span<const double> f, std::span<double> out) {
  check_sizes(weights, f, out);
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = circulant_row(weights, f, i);
  }
}

Eigen::MatrixXd product_matrix(std::span<const double> coeffs) {
  const auto m = static_cast<std::ptrdiff_t>(coeffs.size());
  Eigen::MatrixXd t(m, m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t q = 0; q < m; ++q) {
    for (std::ptrdiff_t k = 0; k < m; ++k) t(k, q) = product_entry(coeffs, k, q);
  }
  return t;
}

Eigen::MatrixXd product_matrix_serial(std::span<const double> coeffs) {
  const auto m = static_cast<std::ptrdiff_t>(coeffs.size());
  Eigen::MatrixXd t(m, m);
  for (std::ptrdiff_t q = 0; q < m; ++q) {
    for (std::ptrdiff_t k = 0; k < m; ++k) t(k, q) = product_entry(coeffs, k, q);
  }
  return t;
}

}  // namespace dpwaves::kernels
