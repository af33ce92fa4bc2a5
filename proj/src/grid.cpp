#include "dpwaves/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dpwaves/errors.hpp"

namespace dpwaves {

PeriodicGrid::PeriodicGrid(double period, int n_points)
    : period_(period), n_points_(n_points) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw DomainError("grid period must be positive and finite");
  }
  if (n_points < 8 || n_points % 2 != 0) {
    throw DomainError("grid size must be even and at least 8, got " +
                      std::to_string(n_points));
  }
}

std::vector<double> PeriodicGrid::nodes() const {
  std::vector<double> x(static_cast<std::size_t>(n_points_));
  for (int j = 0; j < n_points_; ++j) x[static_cast<std::size_t>(j)] = node(j);
  return x;
}

double PeriodicGrid::wavenumber(int k) const {
  return 2.0 * std::numbers::pi * k / period_;
}

std::vector<double> PeriodicGrid::wavenumbers() const {
  std::vector<double> xi(static_cast<std::size_t>(n_points_));
  for (int k = 0; k < n_points_; ++k) {
    const int signed_k = k <= n_points_ / 2 ? k : k - n_points_;
    xi[static_cast<std::size_t>(k)] = wavenumber(signed_k);
  }
  return xi;
}

RealField::RealField(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size()) {
    throw DomainError("field length " + std::to_string(values_.size()) +
                      " does not match grid size " +
                      std::to_string(grid_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("field contains non-finite values");
  }
}

RealField RealField::constant(const PeriodicGrid& grid, double value) {
  return {grid, std::vector<double>(static_cast<std::size_t>(grid.size()), value)};
}

RealField RealField::sample(const PeriodicGrid& grid,
                            const std::function<double(double)>& fn) {
  std::vector<double> v(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) v[static_cast<std::size_t>(j)] = fn(grid.node(j));
  return {grid, std::move(v)};
}

double RealField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double RealField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double RealField::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool RealField::is_even(double tol) const {
  const int n = size();
  for (int j = 1; j < n / 2; ++j) {
    if (std::abs(values_[static_cast<std::size_t>(j)] -
                 values_[static_cast<std::size_t>(n - j)]) > tol) {
      return false;
    }
  }
  return true;
}

namespace {

template <typename Op>
RealField combine(const RealField& f, const RealField& g, Op op) {
  if (!(f.grid() == g.grid())) throw DomainError("fields live on different grids");
  std::vector<double> out(f.data());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = op(out[j], g.data()[j]);
  return {f.grid(), std::move(out)};
}

}  // namespace

RealField operator+(const RealField& f, const RealField& g) {
  return combine(f, g, std::plus<>{});
}
RealField operator-(const RealField& f, const RealField& g) {
  return combine(f, g, std::minus<>{});
}
RealField operator*(const RealField& f, const RealField& g) {
  return combine(f, g, std::multiplies<>{});
}
RealField operator*(double s, const RealField& f) {
  std::vector<double> out(f.data());
  for (double& v : out) v *= s;
  return {f.grid(), std::move(out)};
}

}  // namespace dpwaves
