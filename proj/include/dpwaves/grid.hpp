#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dpwaves {

/// Uniform collocation grid on the circle of circumference P.
///
/// Nodes are x_j = -P/2 + j P/N for j = 0..N-1, so node N/2 is the crest
/// position x = 0 and node 0 is the trough x = -P/2 (identified with P/2).
class PeriodicGrid {
 public:
  PeriodicGrid(double period, int n_points);

  double period() const { return period_; }
  int size() const { return n_points_; }
  double spacing() const { return period_ / n_points_; }

  /// Number of cosine modes carried by fields on this grid (k = 0..N/2-1).
  int n_modes() const { return n_points_ / 2; }
  int origin_index() const { return n_points_ / 2; }

  double node(int j) const { return -0.5 * period_ + j * spacing(); }
  std::vector<double> nodes() const;

  /// xi_k = 2 pi k / P.
  double wavenumber(int k) const;
  /// Wavenumbers in FFT order: 0, 1, ..., N/2, -N/2+1, ..., -1.
  std::vector<double> wavenumbers() const;

  PeriodicGrid refined() const { return {period_, 2 * n_points_}; }

  bool operator==(const PeriodicGrid&) const = default;

 private:
  double period_;
  int n_points_;
};

/// Real samples bound to a grid. All entries are finite.
class RealField {
 public:
  RealField(PeriodicGrid grid, std::vector<double> values);

  static RealField constant(const PeriodicGrid& grid, double value);
  static RealField sample(const PeriodicGrid& grid,
                          const std::function<double(double)>& fn);

  const PeriodicGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& data() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }

  double min() const;
  double max() const;
  double sup_norm() const;

  /// Symmetric about x = 0, i.e. f[j] == f[(N-j) mod N] within tol.
  bool is_even(double tol = 0.0) const;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

RealField operator+(const RealField& f, const RealField& g);
RealField operator-(const RealField& f, const RealField& g);
RealField operator*(double s, const RealField& f);
/// Pointwise product.
RealField operator*(const RealField& f, const RealField& g);

}  // namespace dpwaves
