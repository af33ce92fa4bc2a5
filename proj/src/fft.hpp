#pragma once

#include <complex>
#include <span>

namespace dpwaves::detail {

/// Unnormalized real-to-complex DFT; `out` holds n/2 + 1 entries.
void rfft(std::span<const double> in, std::span<std::complex<double>> out);

/// Unnormalized complex-to-real inverse DFT of a Hermitian half spectrum of
/// n/2 + 1 entries. `in` is left untouched.
void irfft(std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace dpwaves::detail
