#include "spfc/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace spfc {

ModelParams::ModelParams(double a_, double stabilization_, const Grid& grid_)
    : a(a_), stabilization(stabilization_), grid(grid_) {
  if (!(a > 0.0) || !(a <= 1.0)) {
    throw std::invalid_argument("ModelParams: a must lie in (0, 1]");
  }
  if (!(stabilization >= 0.0)) {
    throw std::invalid_argument("ModelParams: stabilization must be >= 0");
  }
}

namespace {

Field grad_squared(const SpectrumCache& cache, const Field& phi) {
  const VectorField g = grad(cache, phi);
  Field s(phi.grid());
  for (const Field& comp : g) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += comp[i] * comp[i];
  }
  return s;
}

// volume * sum (a + lambda^2) |hat(f)_m|^2 = ||L^(1/2) f||^2
double quadratic_form_L(const SpectrumCache& cache, const Field& f, double a) {
  const Spectrum spec = cache.forward(f);
  const auto lambda = cache.lambda();
  const double sum = detail::pairwise_reduce(0, spec.size(), [&](std::size_t m) {
    return (a + lambda[m] * lambda[m]) * std::norm(spec[m]);
  });
  return cache.grid().volume() * sum;
}

}  // namespace

Field nonlinear_mu(const SpectrumCache& cache, const Field& phi) {
  VectorField g = grad(cache, phi);
  Field s(phi.grid());
  for (const Field& comp : g) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += comp[i] * comp[i];
  }
  for (Field& comp : g) {
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= s[i];
  }
  Field out = div(cache, g);
  out *= -1.0;
  out += 2.0 * laplacian(cache, phi);
  return out;
}

Field full_mu(const SpectrumCache& cache, const Field& phi, const ModelParams& params) {
  return nonlinear_mu(cache, phi) + apply_LN(cache, phi, params.a);
}

double energy_e1_from_grad_squared(const Field& grad_sq) {
  const Grid& g = grad_sq.grid();
  const double weight = std::pow(g.spacing(), g.dim);
  const double sum = detail::pairwise_reduce(0, grad_sq.size(), [&](std::size_t i) {
    const double d = 0.5 * grad_sq[i] - 1.0;
    return d * d;
  });
  const double e1 = g.volume() + weight * sum;
  if (!(e1 >= g.volume())) {
    throw std::logic_error("energy_e1: lower bound E1 >= volume violated");
  }
  return e1;
}

double energy_e1(const SpectrumCache& cache, const Field& phi) {
  return energy_e1_from_grad_squared(grad_squared(cache, phi));
}

double energy_total(const SpectrumCache& cache, const Field& phi,
                    const ModelParams& params) {
  return energy_e1(cache, phi) + 0.5 * quadratic_form_L(cache, phi, params.a);
}

double energy_sav(const SpectrumCache& cache, const Field& phi, double r,
                  const ModelParams& params) {
  return 0.5 * quadratic_form_L(cache, phi, params.a) + r * r;
}

double energy_modified(const SpectrumCache& cache, const Field& phi_new,
                       const Field& phi_old, double r_new, double r_old,
                       const ModelParams& params) {
  const Field extrap = axpby(2.0, phi_new, -1.0, phi_old);
  const double quad = 0.25 * (quadratic_form_L(cache, phi_new, params.a) +
                              quadratic_form_L(cache, extrap, params.a));
  const double r_ext = 2.0 * r_new - r_old;
  return quad + 0.5 * (r_new * r_new + r_ext * r_ext);
}

}  // namespace spfc
