#include "levyheat/grid.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>

namespace levyheat {

static_assert(std::endian::native == std::endian::little, "binary dumps assume little-endian");

Grid::Grid(unsigned d, std::size_t n_, double L) : dim(d), n(n_), half_width(L) {
  if (d < 1 || d > 3) throw GridError("grid dimension must be 1, 2 or 3");
  if (n < 4 || !std::has_single_bit(n)) throw GridError("grid size must be a power of two >= 4");
  if (!(L > 0.0) || !std::isfinite(L)) throw GridError("grid half-width must be positive");
}

double Grid::cell_volume() const { return std::pow(spacing(), static_cast<double>(dim)); }

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (unsigned i = 0; i < dim; ++i) s *= n;
  return s;
}

double Grid::frequency(std::size_t k) const {
  const double kk = k < n / 2 ? static_cast<double>(k)
                              : static_cast<double>(k) - static_cast<double>(n);
  return kk * dual_spacing();
}

std::size_t Grid::nearest(double x) const {
  const double j = std::round(x / spacing()) + static_cast<double>(n / 2);
  return static_cast<std::size_t>(std::clamp(j, 0.0, static_cast<double>(n - 1)));
}

DensityField::DensityField(Grid g) : grid_(g), v_(g.size(), 0.0) {}

DensityField::DensityField(Grid g, Vec values) : grid_(g), v_(std::move(values)) {
  if (v_.size() != grid_.size()) throw GridError("field size does not match grid");
}

double DensityField::mass() const {
  double s = 0.0;
  for (double v : v_) s += v;
  return s * grid_.cell_volume();
}

double DensityField::sup() const {
  double m = 0.0;
  for (double v : v_) m = std::max(m, std::abs(v));
  return m;
}

double DensityField::min() const { return v_.empty() ? 0.0 : *std::min_element(v_.begin(), v_.end()); }

Vec DensityField::coords(std::size_t i) const {
  Vec x(grid_.dim);
  for (int a = static_cast<int>(grid_.dim) - 1; a >= 0; --a) {
    x[a] = grid_.node(i % grid_.n);
    i /= grid_.n;
  }
  return x;
}

double DensityField::interpolate(double x) const {
  if (grid_.dim != 1) throw GridError("interpolate: 1-D fields only");
  const double u = x / grid_.spacing() + static_cast<double>(grid_.n / 2);
  if (u < 0.0 || u > static_cast<double>(grid_.n - 1)) return 0.0;
  const auto j = std::min(static_cast<std::size_t>(u), grid_.n - 2);
  const double w = u - static_cast<double>(j);
  return (1.0 - w) * v_[j] + w * v_[j + 1];
}

void DensityField::clip(double threshold) {
  const double floor = -threshold * sup();
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (v_[i] >= 0.0) continue;
    if (v_[i] < floor) {
      throw GridError("negative sample " + std::to_string(v_[i]) + " at index " +
                      std::to_string(i) + ": aliasing, enlarge the grid");
    }
    v_[i] = 0.0;
  }
}

DensityField& DensityField::operator+=(const DensityField& o) {
  if (!(o.grid_ == grid_)) throw GridError("grid mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

DensityField& DensityField::operator-=(const DensityField& o) {
  if (!(o.grid_ == grid_)) throw GridError("grid mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

DensityField& DensityField::operator*=(double c) {
  for (double& v : v_) v *= c;
  return *this;
}

void DensityField::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw LevyError("cannot write " + path);
  out.precision(17);
  for (unsigned a = 0; a < grid_.dim; ++a) out << 'x' << a + 1 << ',';
  out << "value\n";
  for (std::size_t i = 0; i < v_.size(); ++i) {
    for (double c : coords(i)) out << c << ',';
    out << v_[i] << '\n';
  }
}

void DensityField::write_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LevyError("cannot write " + path);
  const std::uint32_t d = grid_.dim;
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  for (unsigned a = 0; a < grid_.dim; ++a) {
    const std::uint64_t n = grid_.n;
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
  }
  const double dx = grid_.spacing();
  out.write(reinterpret_cast<const char*>(&dx), sizeof dx);
  out.write(reinterpret_cast<const char*>(v_.data()),
            static_cast<std::streamsize>(v_.size() * sizeof(double)));
}

DensityField DensityField::read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LevyError("cannot read " + path);
  std::uint32_t d = 0;
  in.read(reinterpret_cast<char*>(&d), sizeof d);
  std::uint64_t n = 0;
  for (std::uint32_t a = 0; a < d; ++a) {
    std::uint64_t na = 0;
    in.read(reinterpret_cast<char*>(&na), sizeof na);
    if (a > 0 && na != n) throw GridError("non-square grids are not supported");
    n = na;
  }
  double dx = 0.0;
  in.read(reinterpret_cast<char*>(&dx), sizeof dx);
  if (!in) throw GridError("truncated header in " + path);
  Grid g(d, n, 0.5 * dx * static_cast<double>(n));
  Vec v(g.size());
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!in) throw GridError("truncated data in " + path);
  return DensityField(g, std::move(v));
}

double relative_sup_error(const DensityField& a, const DensityField& b) {
  if (!(a.grid() == b.grid())) throw GridError("grid mismatch");
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e / b.sup();
}

}  // namespace levyheat
