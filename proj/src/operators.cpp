#include "spfc/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace spfc {

namespace {

// Applies a real per-mode symbol to f in spectral space.
template <class Symbol>
Field apply_symbol(const SpectrumCache& cache, const Field& f, Symbol&& symbol) {
  Spectrum spec = cache.forward(f);
  for (std::size_t m = 0; m < spec.size(); ++m) spec[m] *= symbol(m);
  return cache.inverse(std::move(spec));
}

void require_near_zero_mean(const Field& f, const char* what) {
  if (std::abs(mean(f)) > 1e-12 * (1.0 + norm_linf(f))) {
    throw std::invalid_argument(std::string(what) + ": field must be mean-zero");
  }
}

}  // namespace

VectorField grad(const SpectrumCache& cache, const Field& f) {
  const Spectrum spec = cache.forward(f);
  VectorField out;
  out.reserve(cache.grid().dim);
  for (int axis = 0; axis < cache.grid().dim; ++axis) {
    const auto k = cache.deriv_wavenumber(axis);
    Spectrum comp(spec.size());
    for (std::size_t m = 0; m < spec.size(); ++m) {
      comp[m] = Complex(0.0, k[m]) * spec[m];
    }
    out.push_back(cache.inverse(std::move(comp)));
  }
  return out;
}

Field div(const SpectrumCache& cache, const VectorField& v) {
  if (static_cast<int>(v.size()) != cache.grid().dim) {
    throw std::invalid_argument("div: component count does not match grid dim");
  }
  Spectrum acc(cache.size(), Complex(0.0, 0.0));
  for (int axis = 0; axis < cache.grid().dim; ++axis) {
    const Spectrum spec = cache.forward(v[axis]);
    const auto k = cache.deriv_wavenumber(axis);
    for (std::size_t m = 0; m < acc.size(); ++m) {
      acc[m] += Complex(0.0, k[m]) * spec[m];
    }
  }
  return cache.inverse(std::move(acc));
}

Field laplacian(const SpectrumCache& cache, const Field& f) {
  const auto lambda = cache.lambda();
  return apply_symbol(cache, f, [&](std::size_t m) { return -lambda[m]; });
}

Field biharmonic(const SpectrumCache& cache, const Field& f) {
  const auto lambda = cache.lambda();
  return apply_symbol(cache, f, [&](std::size_t m) { return lambda[m] * lambda[m]; });
}

Field neg_laplacian_pow(const SpectrumCache& cache, const Field& f, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("neg_laplacian_pow: gamma must be > 0");
  const auto lambda = cache.lambda();
  return apply_symbol(cache, f,
                      [&](std::size_t m) { return std::pow(lambda[m], gamma); });
}

Field inv_neg_laplacian(const SpectrumCache& cache, const Field& f) {
  require_near_zero_mean(f, "inv_neg_laplacian");
  const auto lambda = cache.lambda();
  return apply_symbol(cache, f, [&](std::size_t m) {
    return lambda[m] > 0.0 ? 1.0 / lambda[m] : 0.0;
  });
}

Field apply_LN(const SpectrumCache& cache, const Field& f, double a) {
  const auto lambda = cache.lambda();
  return apply_symbol(cache, f,
                      [&](std::size_t m) { return a + lambda[m] * lambda[m]; });
}

Field apply_LN_sqrt(const SpectrumCache& cache, const Field& f, double a) {
  const auto lambda = cache.lambda();
  return apply_symbol(cache, f, [&](std::size_t m) {
    return std::sqrt(a + lambda[m] * lambda[m]);
  });
}

Field apply_AN_inverse(const SpectrumCache& cache, const Field& f, double a,
                       double dt, double stabilization) {
  if (!(dt > 0.0)) throw std::invalid_argument("apply_AN_inverse: dt must be > 0");
  const auto lambda = cache.lambda();
  return apply_symbol(cache, f, [&](std::size_t m) {
    const double l = lambda[m];
    return 1.0 / (1.5 + dt * l * (a + l * l) + stabilization * dt * dt * l * l);
  });
}

Field drop_nyquist_modes(const SpectrumCache& cache, const Field& f) {
  const int n = cache.grid().n;
  if (n % 2 != 0) return f;
  Spectrum spec = cache.forward(f);
  for (std::size_t m = 0; m < spec.size(); ++m) {
    for (int axis = 0; axis < cache.grid().dim; ++axis) {
      if (cache.frequency(m, axis) == n / 2) {
        spec[m] = Complex(0.0, 0.0);
        break;
      }
    }
  }
  return cache.inverse(std::move(spec));
}

namespace {

// sqrt(volume * sum_m weight(m) * |hat(f)_m|^2)
template <class Weight>
double spectral_norm(const SpectrumCache& cache, const Field& f, Weight&& weight) {
  const Spectrum spec = cache.forward(f);
  const double sum = detail::pairwise_reduce(0, spec.size(), [&](std::size_t m) {
    return weight(m) * std::norm(spec[m]);
  });
  return std::sqrt(cache.grid().volume() * sum);
}

// Squared gradient symbol sum_axis deriv_wavenumber^2 (Nyquist-masked).
double grad_symbol_sq(const SpectrumCache& cache, std::size_t m) {
  double s = 0.0;
  for (int axis = 0; axis < cache.grid().dim; ++axis) {
    const double k = cache.deriv_wavenumber(axis)[m];
    s += k * k;
  }
  return s;
}

}  // namespace

double norm_hminus1(const SpectrumCache& cache, const Field& f) {
  require_near_zero_mean(f, "norm_hminus1");
  const auto lambda = cache.lambda();
  return spectral_norm(cache, f, [&](std::size_t m) {
    return lambda[m] > 0.0 ? 1.0 / lambda[m] : 0.0;
  });
}

double norm_h1(const SpectrumCache& cache, const Field& f) {
  return spectral_norm(cache, f,
                       [&](std::size_t m) { return 1.0 + grad_symbol_sq(cache, m); });
}

double norm_h2(const SpectrumCache& cache, const Field& f) {
  const auto lambda = cache.lambda();
  return spectral_norm(cache, f, [&](std::size_t m) {
    return 1.0 + grad_symbol_sq(cache, m) + lambda[m] * lambda[m];
  });
}

double norm_grad_laplacian(const SpectrumCache& cache, const Field& f) {
  const auto lambda = cache.lambda();
  return spectral_norm(cache, f, [&](std::size_t m) {
    return grad_symbol_sq(cache, m) * lambda[m] * lambda[m];
  });
}

}  // namespace spfc
