#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "dpwaves/errors.hpp"

namespace dpwaves::detail {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// FFTW planning is not thread safe, execution of an existing plan on new
// arrays is. Plans are planned unaligned so any std::vector buffer works.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.inverse);
    }
  }

  PlanPair get(int n) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(n); it != plans_.end()) return it->second;
    std::vector<double> real(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(n / 2 + 1));
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(n, real.data(), cplx, flags);
    p.inverse = fftw_plan_dft_c2r_1d(n, cplx, real.data(), flags | FFTW_DESTROY_INPUT);
    if (p.forward == nullptr || p.inverse == nullptr) {
      throw InternalError("FFTW failed to create a plan");
    }
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void rfft(std::span<const double> in, std::span<std::complex<double>> out) {
  const int n = static_cast<int>(in.size());
  if (out.size() != static_cast<std::size_t>(n / 2 + 1)) {
    throw InternalError("rfft: output size mismatch");
  }
  const PlanPair p = cache().get(n);
  // r2c does not modify its input.
  fftw_execute_dft_r2c(p.forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void irfft(std::span<const std::complex<double>> in, std::span<double> out) {
  const int n = static_cast<int>(out.size());
  if (in.size() != static_cast<std::size_t>(n / 2 + 1)) {
    throw InternalError("irfft: input size mismatch");
  }
  const PlanPair p = cache().get(n);
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(p.inverse, reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
}

}  // namespace dpwaves::detail
