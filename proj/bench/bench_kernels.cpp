// Serial references against the OpenMP kernels. Run with
// OMP_NUM_THREADS set to compare thread counts.
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "dpwaves/compute_kernels.hpp"
#include "dpwaves/dp_equation.hpp"
#include "dpwaves/operators.hpp"

using namespace dpwaves;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

template <bool Parallel>
void circulant(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto w = random_vector(n, 1), f = random_vector(n, 2);
  std::vector<double> out(n);
  for (auto _ : st) {
    if constexpr (Parallel) {
      kernels::circulant_apply(w, f, out);
    } else {
      kernels::circulant_apply_serial(w, f, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(n * n));
}

template <bool Parallel>
void product(benchmark::State& st) {
  std::vector<double> c = random_vector(static_cast<std::size_t>(st.range(0)), 3);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] /= static_cast<double>((k + 1) * (k + 1));
  for (auto _ : st) {
    Eigen::MatrixXd m = Parallel ? kernels::product_matrix(c) : kernels::product_matrix_serial(c);
    benchmark::DoNotOptimize(m.data());
  }
}

template <bool Parallel>
void jacobian_assembly(benchmark::State& st) {
  const auto m = static_cast<std::size_t>(st.range(0));
  std::vector<double> c(m, 0.0);
  c[0] = 1.5;
  c[1] = 0.1;
  const WaveState s(PeriodicGrid(1.0, 2 * static_cast<int>(m)), c, 2.0, 1.0);
  for (auto _ : st) {
    LinearOperatorRep j = Parallel ? jacobian(s) : jacobian_serial(s);
    benchmark::DoNotOptimize(j.matrix.data());
  }
}

template <bool Parallel>
void quadrature_L(benchmark::State& st) {
  const PeriodicGrid g(1.0, static_cast<int>(st.range(0)));
  const RealField f = RealField::sample(g, [](double x) { return std::exp(std::cos(6.283185307179586 * x)); });
  for (auto _ : st) {
    RealField r = Parallel ? apply_L_quadrature(f) : apply_L_quadrature_serial(f);
    benchmark::DoNotOptimize(r.data().data());
  }
}

}  // namespace

BENCHMARK(circulant<false>)->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(circulant<true>)->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(product<false>)->RangeMultiplier(4)->Range(128, 2048);
BENCHMARK(product<true>)->RangeMultiplier(4)->Range(128, 2048);
BENCHMARK(jacobian_assembly<false>)->RangeMultiplier(4)->Range(128, 1024);
BENCHMARK(jacobian_assembly<true>)->RangeMultiplier(4)->Range(128, 1024);
BENCHMARK(quadrature_L<false>)->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(quadrature_L<true>)->RangeMultiplier(4)->Range(256, 4096);

BENCHMARK_MAIN();
