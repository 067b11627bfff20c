#pragma once

#include "spfc/spectrum.hpp"

namespace spfc {

// Fourier collocation differential operators.  All of them are linear, map
// mean-zero fields to mean-zero fields, and commute with each other.

VectorField grad(const SpectrumCache& cache, const Field& f);
Field div(const SpectrumCache& cache, const VectorField& v);
Field laplacian(const SpectrumCache& cache, const Field& f);
Field biharmonic(const SpectrumCache& cache, const Field& f);   // Laplacian^2

// (-Laplacian)^gamma for gamma > 0 (fractional powers allowed).
Field neg_laplacian_pow(const SpectrumCache& cache, const Field& f, double gamma);

// Inverse of -Laplacian on the mean-zero subspace; requires |mean(f)| small
// (<= 1e-12 * ||f||_inf) and returns a mean-zero field.
Field inv_neg_laplacian(const SpectrumCache& cache, const Field& f);

// L = a*I + Laplacian^2 (the positive-definite linear part, a in (0, 1]) and
// its square root L^(1/2), with symbol sqrt(a + lambda^2).
Field apply_LN(const SpectrumCache& cache, const Field& f, double a);
Field apply_LN_sqrt(const SpectrumCache& cache, const Field& f, double a);

// Solves (3/2 I - dt * Laplacian o L_stab) u = f by diagonal division, where
// L_stab = a*I + Laplacian^2 + stabilization*dt*(-Laplacian).  Per-mode
// divisor 3/2 + dt*lambda*(a + lambda^2) + stabilization*dt^2*lambda^2 >= 3/2.
Field apply_AN_inverse(const SpectrumCache& cache, const Field& f, double a,
                       double dt, double stabilization = 0.0);

// Zeroes every mode with an axis frequency of n/2 (even n only); identity for
// odd n.  Even-n grids need this projection for the exact div(grad) =
// Laplacian and summation-by-parts identities, because the first-derivative
// multiplier drops the sign-ambiguous Nyquist mode while the Laplacian keeps it.
Field drop_nyquist_modes(const SpectrumCache& cache, const Field& f);

// Spectral Sobolev-type norms (h^dim-weighted, via Parseval).
double norm_hminus1(const SpectrumCache& cache, const Field& f);  // mean-zero f
double norm_h1(const SpectrumCache& cache, const Field& f);
double norm_h2(const SpectrumCache& cache, const Field& f);
double norm_grad_laplacian(const SpectrumCache& cache, const Field& f);

}  // namespace spfc
