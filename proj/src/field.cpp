#include "spfc/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spfc {

Grid::Grid(int dim_, int n_, double length_) : dim(dim_), n(n_), length(length_) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("Grid: dim must be 2 or 3");
  if (n < 4) throw std::invalid_argument("Grid: n must be at least 4");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("Grid: length must be positive and finite");
  }
}

double Grid::volume() const {
  double v = 1.0;
  for (int d = 0; d < dim; ++d) v *= length;
  return v;
}

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
  return s;
}

Field::Field(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("Field: value count does not match grid size");
  }
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

namespace {

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) {
    throw std::invalid_argument("Field: grids do not match");
  }
}

}  // namespace

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other[i];
  return *this;
}

Field& Field::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator*(double factor, Field f) { return f *= factor; }

Field axpby(double a, const Field& x, double b, const Field& y) {
  require_same_grid(x, y);
  Field out(x.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

double pairwise_sum(std::span<const double> values) {
  return detail::pairwise_reduce(0, values.size(), [&](std::size_t i) { return values[i]; });
}

double mean(const Field& f) {
  return pairwise_sum(f.values()) / static_cast<double>(f.size());
}

double inner(const Field& f, const Field& g) {
  require_same_grid(f, g);
  const double weight = std::pow(f.grid().spacing(), f.grid().dim);
  return weight * detail::pairwise_reduce(0, f.size(), [&](std::size_t i) { return f[i] * g[i]; });
}

double norm_l2(const Field& f) { return std::sqrt(inner(f, f)); }

double norm_lp(const Field& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm_lp: p must be >= 1");
  const double weight = std::pow(f.grid().spacing(), f.grid().dim);
  const double sum = detail::pairwise_reduce(
      0, f.size(), [&](std::size_t i) { return std::pow(std::abs(f[i]), p); });
  return std::pow(weight * sum, 1.0 / p);
}

double norm_linf(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace spfc
