#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "spfc/field.hpp"

namespace spfc {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

// Per-grid cache of wavenumber tables and FFT plans.
//
// Coefficient convention: forward() returns hat(f) = DFT(f) / n^dim, so each
// coefficient multiplies exp(i k.x) directly and Parseval reads
// ||f||_2^2 = volume * sum_m |hat(f)_m|^2.  Modes are stored in FFT layout
// (frequencies 0, 1, ..., n/2, -(n-1)/2, ..., -1 per axis), addressed with the
// same row-major x-fastest ordering as Field.
//
// For even n the axis Nyquist frequency n/2 has an ambiguous sign; the
// first-derivative multiplier deriv_wavenumber() zeroes it (the standard
// collocation choice), while the Laplacian symbol lambda() keeps the full
// (2*pi*(n/2)/length)^2 contribution.
class SpectrumCache {
 public:
  explicit SpectrumCache(const Grid& grid);
  ~SpectrumCache();
  SpectrumCache(const SpectrumCache&) = delete;
  SpectrumCache& operator=(const SpectrumCache&) = delete;

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }

  // |k|^2 >= 0 for every mode (size n^dim).
  std::span<const double> lambda() const { return lambda_; }

  // Signed axis wavenumber 2*pi*freq/length per mode; Nyquist kept as +n/2.
  std::span<const double> wavenumber(int axis) const;

  // Axis wavenumber used for first derivatives; Nyquist zeroed for even n.
  std::span<const double> deriv_wavenumber(int axis) const;

  // Integer frequency index along `axis` of flat mode index `mode`,
  // in -(n-1)/2 .. n/2.
  int frequency(std::size_t mode, int axis) const;

  Spectrum forward(const Field& f) const;

  // Inverse transform; consumes the spectrum.  Guards against spectra that do
  // not describe a real field: the imaginary residue of the complex transform
  // must stay below 1e-10 of its total norm (i.e. the input must be Hermitian
  // relative to its own content); larger residues throw.
  Field inverse(Spectrum spec) const;

  // Inverse transform of the Hermitian part of `spec` (the real part of the
  // complex transform), without the residue guard.  For spectra assembled by
  // linear combination in spectral space: those are Hermitian by construction,
  // but their anti-Hermitian round-off scales with the assembly operands,
  // which can legitimately dwarf a heavily cancelled result.
  Field inverse_hermitian(Spectrum spec) const;

 private:
  Grid grid_;
  std::vector<double> lambda_;
  std::vector<std::vector<double>> wavenumber_;        // [axis][mode]
  std::vector<std::vector<double>> deriv_wavenumber_;  // [axis][mode]
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

}  // namespace spfc
