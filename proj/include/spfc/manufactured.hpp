#pragma once

#include "spfc/energy.hpp"

namespace spfc {

// Time-periodic manufactured solution on the 2-D unit torus:
//   phi_e(x, y, t) = (1/(2 pi)) sin(2 pi x) cos(2 pi y) cos(t).
// Grids must have dim == 2 and length == 1.

Field manufactured_solution(const Grid& grid, double t);
Field manufactured_time_derivative(const Grid& grid, double t);

// Source term that makes phi_e solve the forced semi-discrete equation:
//   f = d/dt phi_e - Laplacian(mu(phi_e)), with the spatial part evaluated by
// the discrete operators on the given grid (so the semi-discrete equation is
// satisfied exactly, and time stepping is the only remaining error).
Field manufactured_forcing(const SpectrumCache& cache, double t,
                           const ModelParams& params);

}  // namespace spfc
