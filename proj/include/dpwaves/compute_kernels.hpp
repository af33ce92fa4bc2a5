#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version and a serial
// reference with identical arithmetic per output element, so the two agree
// bit for bit; tests compare them and bench/ times them.

#include <span>

#include <Eigen/Dense>

namespace dpwaves::kernels {

/// out_i = sum_j weights[(i - j) mod n] * f_j.
void circulant_apply(std::span<const double> weights, std::span<const double> f,
                     std::span<double> out);
void circulant_apply_serial(std::span<const double> weights,
                            std::span<const double> f, std::span<double> out);

/// Galerkin matrix of v -> P_M(phi v) on the cosine basis cos(2 pi k x/P),
/// k < M, where phi has cosine coefficients `coeffs` (size M). Entry (k, q)
/// collects cos(p)cos(q) = (cos(p+q) + cos(p-q))/2 terms landing in mode k.
Eigen::MatrixXd product_matrix(std::span<const double> coeffs);
Eigen::MatrixXd product_matrix_serial(std::span<const double> coeffs);

}  // namespace dpwaves::kernels
