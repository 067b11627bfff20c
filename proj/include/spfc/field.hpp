#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spfc {

// Uniform periodic grid on (0, length)^dim with n collocation points per axis,
// nodes x_i = i * spacing(), i = 0 .. n-1.
struct Grid {
  int dim;
  int n;
  double length;

  Grid(int dim_, int n_, double length_);

  double spacing() const { return length / n; }
  double volume() const;
  std::size_t size() const;  // n^dim

  friend bool operator==(const Grid&, const Grid&) = default;
};

// Real-valued grid function, stored row-major with x fastest:
//   2D: (ix, iy)     -> iy * n + ix
//   3D: (ix, iy, iz) -> (iz * n + iy) * n + ix
class Field {
 public:
  explicit Field(const Grid& grid);
  Field(const Grid& grid, std::vector<double> values);

  // Evaluates f(x, y, z) at every node; z is passed as 0 in 2D.
  template <class F>
  static Field sample(const Grid& grid, F&& f) {
    Field out(grid);
    const double h = grid.spacing();
    const int n = grid.n;
    std::size_t idx = 0;
    const int nz = grid.dim == 3 ? n : 1;
    for (int iz = 0; iz < nz; ++iz) {
      for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
          out.values_[idx++] = f(ix * h, iy * h, iz * h);
        }
      }
    }
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double factor);

 private:
  Grid grid_;
  std::vector<double> values_;
};

// One component per axis (dim entries).
using VectorField = std::vector<Field>;

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator*(double factor, Field f);

// a*x + b*y
Field axpby(double a, const Field& x, double b, const Field& y);

namespace detail {

// Deterministic pairwise reduction of term(i) for i in [begin, end).
template <class F>
double pairwise_reduce(std::size_t begin, std::size_t end, F&& term) {
  const std::size_t len = end - begin;
  if (len <= 64) {
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += term(i);
    return sum;
  }
  const std::size_t mid = begin + len / 2;
  return pairwise_reduce(begin, mid, term) + pairwise_reduce(mid, end, term);
}

}  // namespace detail

double pairwise_sum(std::span<const double> values);

// Grid reductions; inner products and L^p norms carry the h^dim quadrature
// weight, so they approximate their continuum counterparts.
double mean(const Field& f);
double inner(const Field& f, const Field& g);
double norm_l2(const Field& f);
double norm_lp(const Field& f, double p);
double norm_linf(const Field& f);

}  // namespace spfc
