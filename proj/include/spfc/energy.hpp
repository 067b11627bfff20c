#pragma once

#include "spfc/operators.hpp"

namespace spfc {

struct ModelParams {
  double a;              // linear coefficient, in (0, 1]
  double stabilization;  // optional extra damping coefficient A >= 0 (0 = off)
  Grid grid;

  ModelParams(double a_, double stabilization_, const Grid& grid_);
};

// mu_nl(phi) = -div(|grad phi|^2 grad phi) + 2 * Laplacian(phi); mean-zero up
// to round-off, and the variational derivative of the E1 part of the energy.
Field nonlinear_mu(const SpectrumCache& cache, const Field& phi);

// Full chemical potential mu = mu_nl(phi) + (a*I + Laplacian^2) phi.
Field full_mu(const SpectrumCache& cache, const Field& phi, const ModelParams& params);

// E1 = integral of (|grad phi|^4/4 - |grad phi|^2 + 2), evaluated as
// volume + h^dim * sum (|grad phi|^2/2 - 1)^2, which keeps the lower bound
// E1 >= volume structural.  Violations throw (they cannot happen in exact or
// floating-point arithmetic; the check guards future edits).
double energy_e1(const SpectrumCache& cache, const Field& phi);
double energy_e1_from_grad_squared(const Field& grad_sq);

// E = E1 + (1/2) <phi, L phi> with L = a*I + Laplacian^2.
double energy_total(const SpectrumCache& cache, const Field& phi,
                    const ModelParams& params);

// Quadratic SAV energy (a/2)||phi||^2 + (1/2)||Laplacian phi||^2 + r^2.
double energy_sav(const SpectrumCache& cache, const Field& phi, double r,
                  const ModelParams& params);

// BDF2 Lyapunov functional
//   (1/4)(||L^(1/2) phi_new||^2 + ||L^(1/2)(2 phi_new - phi_old)||^2)
// + (1/2)(r_new^2 + (2 r_new - r_old)^2);
// non-increasing from step to step for the unforced scheme.
double energy_modified(const SpectrumCache& cache, const Field& phi_new,
                       const Field& phi_old, double r_new, double r_old,
                       const ModelParams& params);

}  // namespace spfc
