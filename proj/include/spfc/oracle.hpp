#pragma once

#include "spfc/stepper.hpp"

namespace spfc::oracle {

// Reference implementations built from dense DFT matrices and a dense coupled
// linear solve.  Everything here is deliberately literal and slow (O(n^(2*dim))
// memory); grids are capped at n <= 12, dim == 2.  The production pipeline is
// validated against these routes, never the other way around.

enum class OperatorKind {
  GradX,
  GradY,
  Laplacian,
  Biharmonic,
  LN,  // a*I + Laplacian^2
  AN,  // 3/2 I - dt * Laplacian o (LN + stabilization*dt*(-Laplacian))
};

// Whether the first-derivative symbol zeroes the even-n Nyquist frequency
// (the production convention) or keeps it as +n/2.  Kept exists for
// convention tests only: it makes the dense matrix complex, while its real
// part still matches the zeroed convention.
enum class NyquistMode { Zeroed, Kept };

struct DenseParams {
  double a = 1.0;
  double dt = 1.0;
  double stabilization = 0.0;
};

// Dense operator matrix acting on real grid vectors (row-major, x fastest,
// same layout as Field).  Entries are assembled as (1/n^dim) * sum over modes
// of symbol(k) * exp(i k.(x_r - x_c)) -- the literal DFT-diagonalization, with
// no FFT involved.
class DenseOperator {
 public:
  DenseOperator(std::size_t size, std::vector<Complex> entries);

  std::size_t size() const { return size_; }
  Complex entry(std::size_t row, std::size_t col) const {
    return entries_[row * size_ + col];
  }

  // Applies the real part of the matrix (imaginary parts cancel for the
  // symmetric symbols used here; they are kept so tests can measure them).
  std::vector<double> apply(std::span<const double> v) const;

  double max_abs_imag() const;

 private:
  std::size_t size_;
  std::vector<Complex> entries_;
};

DenseOperator dense_operator(OperatorKind kind, const Grid& grid,
                             const DenseParams& params = {},
                             NyquistMode nyquist = NyquistMode::Zeroed);

// E1 computed by the dense route: dense gradient matrices, pointwise
// quadrature h^dim * sum (|grad|^4/4 - |grad|^2 + 2).
double dense_energy_e1(const Grid& grid, std::span<const double> phi);

// mu_nl by the dense route: -div(|grad|^2 grad) + 2*Laplacian via matrices.
std::vector<double> dense_nonlinear_mu(const Grid& grid, std::span<const double> phi);

struct DenseStepResult {
  Field phi_new;
  double r_new;
  // Backward-error residual of the dense solve:
  // ||M u - b|| / (||M||_F ||u|| + ||b||).
  double residual;
};

// One step of the same scheme, computed as one dense coupled linear solve in
// the (n^dim + 1) unknowns (phi_new, r_new), with every operator applied as an
// explicit matrix.  Shares no code with spfc::step beyond the state type.
DenseStepResult dense_step(const SavState& state, const Field* forcing = nullptr);

}  // namespace spfc::oracle
