#pragma once

#include <span>
#include <vector>

namespace dpwaves {

// Even P-periodic functions phi(x) = sum_{k<M} c_k cos(2 pi k x / P),
// sampled at x_j = -P/2 + j P/n. The crest sits at x = 0.

/// Values at the n nodes. Requires M <= n/2.
std::vector<double> cosine_synthesis(std::span<const double> coeffs, int n_nodes);

/// Spectral derivative of the given order at the n nodes.
std::vector<double> cosine_derivative(std::span<const double> coeffs, double period,
                                      int n_nodes, int order);

/// Projection of samples on an n-point grid onto the first M cosine modes.
/// Requires M <= n/2; the Nyquist mode is dropped.
std::vector<double> cosine_analysis(std::span<const double> values, int n_modes);

/// Galerkin projection of the product onto the first M modes, computed on a
/// zero-padded grid of at least 3M points so no product mode aliases back.
std::vector<double> dealiased_product(std::span<const double> a,
                                      std::span<const double> b);
std::vector<double> dealiased_square(std::span<const double> coeffs);

/// Direct summation at an arbitrary point.
double cosine_eval(std::span<const double> coeffs, double period, double x);

/// c_k <- c_k / (1 + (2 pi k / P)^2).
void apply_L_modes(std::span<double> coeffs, double period);

/// (1/P) int u v dx over one period, from coefficients (Parseval).
double mean_square_inner(std::span<const double> a, std::span<const double> b);

/// Size of the padded grid used for products of M-mode series.
int padded_size(int n_modes);

}  // namespace dpwaves
