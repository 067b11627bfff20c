#include "spfc/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace spfc {

namespace {

// FFTW planning/destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

struct SpectrumCache::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

SpectrumCache::SpectrumCache(const Grid& grid) : grid_(grid), plans_(new Plans) {
  const int n = grid_.n;
  const std::size_t total = grid_.size();
  const double base = 2.0 * std::numbers::pi / grid_.length;

  // Signed frequency per axis position in FFT layout.
  std::vector<int> freq(n);
  for (int i = 0; i < n; ++i) freq[i] = i <= n / 2 ? i : i - n;
  const bool even = n % 2 == 0;

  lambda_.assign(total, 0.0);
  wavenumber_.assign(grid_.dim, std::vector<double>(total, 0.0));
  deriv_wavenumber_.assign(grid_.dim, std::vector<double>(total, 0.0));
  for (std::size_t m = 0; m < total; ++m) {
    std::size_t rest = m;
    for (int axis = 0; axis < grid_.dim; ++axis) {
      const int idx = static_cast<int>(rest % n);
      rest /= n;
      const double k = base * freq[idx];
      wavenumber_[axis][m] = k;
      deriv_wavenumber_[axis][m] = (even && idx == n / 2) ? 0.0 : k;
      lambda_[m] += k * k;
    }
  }

  // Row-major x-fastest storage means x is the innermost (last) FFTW dim.
  std::vector<int> dims(grid_.dim, n);
  Spectrum dummy(total);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->forward = fftw_plan_dft(grid_.dim, dims.data(), as_fftw(dummy.data()),
                                  as_fftw(dummy.data()), FFTW_FORWARD,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->backward = fftw_plan_dft(grid_.dim, dims.data(), as_fftw(dummy.data()),
                                   as_fftw(dummy.data()), FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plans_->forward == nullptr || plans_->backward == nullptr) {
    throw std::runtime_error("SpectrumCache: FFTW plan creation failed");
  }
}

SpectrumCache::~SpectrumCache() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plans_->forward != nullptr) fftw_destroy_plan(plans_->forward);
  if (plans_->backward != nullptr) fftw_destroy_plan(plans_->backward);
}

std::span<const double> SpectrumCache::wavenumber(int axis) const {
  return wavenumber_.at(axis);
}

std::span<const double> SpectrumCache::deriv_wavenumber(int axis) const {
  return deriv_wavenumber_.at(axis);
}

int SpectrumCache::frequency(std::size_t mode, int axis) const {
  const int n = grid_.n;
  std::size_t rest = mode;
  for (int a = 0; a < axis; ++a) rest /= n;
  const int idx = static_cast<int>(rest % n);
  return idx <= n / 2 ? idx : idx - n;
}

Spectrum SpectrumCache::forward(const Field& f) const {
  if (!(f.grid() == grid_)) throw std::invalid_argument("forward: grid mismatch");
  Spectrum spec(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) spec[i] = Complex(f[i], 0.0);
  fftw_execute_dft(plans_->forward, as_fftw(spec.data()), as_fftw(spec.data()));
  const double scale = 1.0 / static_cast<double>(f.size());
  for (Complex& c : spec) c *= scale;
  return spec;
}

Field SpectrumCache::inverse(Spectrum spec) const {
  if (spec.size() != grid_.size()) throw std::invalid_argument("inverse: size mismatch");
  fftw_execute_dft(plans_->backward, as_fftw(spec.data()), as_fftw(spec.data()));

  const double real_sq = detail::pairwise_reduce(0, spec.size(), [&](std::size_t i) {
    return spec[i].real() * spec[i].real();
  });
  const double imag_sq = detail::pairwise_reduce(0, spec.size(), [&](std::size_t i) {
    return spec[i].imag() * spec[i].imag();
  });
  if (std::sqrt(imag_sq) > 1e-10 * std::sqrt(real_sq + imag_sq)) {
    throw std::runtime_error(
        "SpectrumCache::inverse: imaginary residue exceeds 1e-10 of field norm; "
        "input spectrum does not describe a real field");
  }

  Field out(grid_);
  for (std::size_t i = 0; i < spec.size(); ++i) out[i] = spec[i].real();
  return out;
}

Field SpectrumCache::inverse_hermitian(Spectrum spec) const {
  if (spec.size() != grid_.size()) {
    throw std::invalid_argument("inverse_hermitian: size mismatch");
  }
  fftw_execute_dft(plans_->backward, as_fftw(spec.data()), as_fftw(spec.data()));
  Field out(grid_);
  for (std::size_t i = 0; i < spec.size(); ++i) out[i] = spec[i].real();
  return out;
}

}  // namespace spfc
