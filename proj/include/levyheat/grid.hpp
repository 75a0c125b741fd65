#pragma once

#include <string>
#include <vector>

#include "levyheat/common.hpp"

namespace levyheat {

/// Uniform lattice with N points per axis on [-L, L)^d, nodes x_j = (j - N/2) dx.
struct Grid {
  unsigned dim = 1;
  std::size_t n = 0;
  double half_width = 0.0;

  Grid() = default;
  Grid(unsigned dim, std::size_t n, double half_width);

  double spacing() const { return 2.0 * half_width / static_cast<double>(n); }
  double cell_volume() const;
  double node(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(n / 2)) * spacing();
  }
  std::size_t size() const;
  std::vector<int> dims() const { return std::vector<int>(dim, static_cast<int>(n)); }
  /// pi / L.
  double dual_spacing() const { return kPi / half_width; }
  /// Signed frequency of FFT slot k: (k or k - N) pi / L.
  double frequency(std::size_t k) const;
  /// Nearest node index to x along an axis (clamped).
  std::size_t nearest(double x) const;

  bool operator==(const Grid&) const = default;
};

/// Real samples of a density on a Grid, row-major.
class DensityField {
 public:
  DensityField() = default;
  explicit DensityField(Grid g);
  DensityField(Grid g, Vec values);

  const Grid& grid() const { return grid_; }
  const Vec& values() const { return v_; }
  Vec& values() { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }
  std::size_t size() const { return v_.size(); }

  double mass() const;
  double sup() const;
  double min() const;
  /// Node coordinates of flat index i.
  Vec coords(std::size_t i) const;
  /// Linear interpolation along a 1-D field.
  double interpolate(double x) const;

  /// Zeroes negatives down to -threshold * sup; throws GridError on larger negativity.
  void clip(double threshold = 1e-12);

  DensityField& operator+=(const DensityField& o);
  DensityField& operator-=(const DensityField& o);
  DensityField& operator*=(double c);

  /// Columns x1..xd, value.
  void write_csv(const std::string& path) const;
  /// Header: u32 d, u64 N per axis, f64 dx; then row-major little-endian f64 values.
  void write_binary(const std::string& path) const;
  static DensityField read_binary(const std::string& path);

 private:
  Grid grid_;
  Vec v_;
};

/// max |a - b| / max |b|.
double relative_sup_error(const DensityField& a, const DensityField& b);

}  // namespace levyheat
