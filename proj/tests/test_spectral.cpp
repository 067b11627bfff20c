#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "spfc/harness.hpp"
#include "spfc/operators.hpp"
#include "spfc/spectrum.hpp"

using namespace spfc;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_l2(const Field& got, const Field& want) {
  return norm_l2(got - want) / std::max(norm_l2(want), 1e-300);
}

}  // namespace

TEST_CASE("forward/inverse round trip and Parseval") {
  for (const int n : {5, 16}) {
    const Grid grid(2, n, 3.0);
    const SpectrumCache cache(grid);
    const Field f = harness::random_initial_field(grid, 11, 1.0);

    const Spectrum spec = cache.forward(f);
    const Field back = cache.inverse(Spectrum(spec));
    CHECK(rel_l2(back, f) < 1e-14);

    const double spectral = grid.volume() *
        detail::pairwise_reduce(0, spec.size(), [&](std::size_t m) {
          return std::norm(spec[m]);
        });
    CHECK(spectral == doctest::Approx(inner(f, f)).epsilon(1e-13));
  }
}

TEST_CASE("forward transform of a pure cosine hits exactly two modes") {
  const Grid grid(2, 8, 2.0);
  const SpectrumCache cache(grid);
  const Field f = Field::sample(grid, [&](double x, double, double) {
    return std::cos(2.0 * kPi * x / grid.length);
  });
  const Spectrum spec = cache.forward(f);
  for (std::size_t m = 0; m < spec.size(); ++m) {
    const int fx = cache.frequency(m, 0);
    const int fy = cache.frequency(m, 1);
    const double expected = (std::abs(fx) == 1 && fy == 0) ? 0.5 : 0.0;
    CHECK(std::abs(spec[m] - Complex(expected, 0.0)) < 1e-15);
  }
}

TEST_CASE("derivatives are exact on trigonometric data") {
  const double L = 2.5;
  const Grid grid(2, 16, L);
  const SpectrumCache cache(grid);
  const double kx = 2.0 * kPi / L, ky = 2.0 * kPi * 3.0 / L;
  const Field f = Field::sample(grid, [&](double x, double y, double) {
    return std::sin(kx * x) * std::cos(ky * y);
  });

  const VectorField g = grad(cache, f);
  const Field gx_exact = Field::sample(grid, [&](double x, double y, double) {
    return kx * std::cos(kx * x) * std::cos(ky * y);
  });
  const Field gy_exact = Field::sample(grid, [&](double x, double y, double) {
    return -ky * std::sin(kx * x) * std::sin(ky * y);
  });
  CHECK(rel_l2(g[0], gx_exact) < 1e-13);
  CHECK(rel_l2(g[1], gy_exact) < 1e-13);

  // f is a Laplacian eigenfunction with eigenvalue -(kx^2 + ky^2).
  const double lambda = kx * kx + ky * ky;
  CHECK(rel_l2(laplacian(cache, f), -lambda * f) < 1e-13);
  CHECK(rel_l2(biharmonic(cache, f), lambda * lambda * f) < 1e-13);
  CHECK(rel_l2(neg_laplacian_pow(cache, f, 1.0), lambda * f) < 1e-13);
  CHECK(rel_l2(neg_laplacian_pow(cache, f, 1.5), std::pow(lambda, 1.5) * f) < 1e-13);

  const double a = 0.8;
  CHECK(rel_l2(apply_LN(cache, f, a), (a + lambda * lambda) * f) < 1e-13);
  CHECK(rel_l2(apply_LN_sqrt(cache, f, a), std::sqrt(a + lambda * lambda) * f) < 1e-13);
}

TEST_CASE("operator identities on the Nyquist-free subspace") {
  const Grid grid(2, 8, 1.0);
  const SpectrumCache cache(grid);
  const Field u = drop_nyquist_modes(cache, harness::random_initial_field(grid, 21, 1.0));

  CHECK(rel_l2(div(cache, grad(cache, u)), laplacian(cache, u)) < 1e-12);

  // Fractional-power consistency: (-Lap)^(1/2) applied twice equals -Lap.
  const Field half_twice =
      neg_laplacian_pow(cache, neg_laplacian_pow(cache, u, 0.5), 0.5);
  Field neg_lap = laplacian(cache, u);
  neg_lap *= -1.0;
  CHECK(rel_l2(half_twice, neg_lap) < 1e-12);

  // inv(-Lap) is a true inverse on mean-zero data.
  Field w = u;
  const double m = mean(w);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= m;
  CHECK(rel_l2(inv_neg_laplacian(cache, axpby(-1.0, laplacian(cache, w), 0.0, w)), w) <
        1e-12);

  Field with_mean = u;
  for (std::size_t i = 0; i < with_mean.size(); ++i) with_mean[i] += 1.0;
  CHECK_THROWS_AS(inv_neg_laplacian(cache, with_mean), std::invalid_argument);
}

TEST_CASE("even-n Nyquist convention: div(grad) drops what the Laplacian keeps") {
  const double L = 2.0;
  const Grid grid(2, 8, L);
  const SpectrumCache cache(grid);
  // Pure axis-Nyquist mode (frequency n/2 = 4): the first-derivative
  // multiplier zeroes it, the Laplacian symbol does not.
  const Field nyq = Field::sample(grid, [&](double x, double, double) {
    return std::cos(2.0 * kPi * 4.0 / L * x);
  });
  CHECK(norm_l2(div(cache, grad(cache, nyq))) < 1e-12);
  const double lambda = std::pow(2.0 * kPi * 4.0 / L, 2);
  CHECK(norm_l2(laplacian(cache, nyq)) ==
        doctest::Approx(lambda * norm_l2(nyq)).epsilon(1e-12));
  // The projection removes the discrepancy entirely.
  CHECK(norm_l2(drop_nyquist_modes(cache, nyq)) < 1e-14);

  // Odd n has no Nyquist mode: projection is the identity.
  const Grid godd(2, 5, L);
  const SpectrumCache codd(godd);
  const Field r = harness::random_initial_field(godd, 7, 1.0);
  CHECK(rel_l2(drop_nyquist_modes(codd, r), r) < 1e-15);
}

TEST_CASE("inverse rejects spectra of non-real fields") {
  const Grid grid(2, 8, 1.0);
  const SpectrumCache cache(grid);
  Spectrum spec(grid.size(), Complex(0.0, 0.0));
  spec[1] = Complex(1.0, 0.0);  // mode (1, 0) with no conjugate partner
  CHECK_THROWS_AS(cache.inverse(Spectrum(spec)), std::runtime_error);

  // inverse_hermitian accepts the same spectrum and returns the field of its
  // Hermitian part: (delta_{(1,0)} + delta_{(-1,0)})/2 -> cos(2 pi x).
  const Field herm = cache.inverse_hermitian(std::move(spec));
  const Field want = Field::sample(grid, [](double x, double, double) {
    return std::cos(2.0 * kPi * x);
  });
  CHECK(rel_l2(herm, want) < 1e-14);
}

TEST_CASE("spectral Sobolev norms on an eigenfunction") {
  const double L = 2.0 * kPi;
  const Grid grid(2, 16, L);
  const SpectrumCache cache(grid);
  const double k = 2.0;  // frequency 2 on the 2*pi torus
  const Field f = Field::sample(grid, [&](double x, double, double) {
    return std::cos(k * x);
  });
  const double l2 = norm_l2(f);
  const double lambda = k * k;
  CHECK(norm_h1(cache, f) ==
        doctest::Approx(std::sqrt(1.0 + lambda) * l2).epsilon(1e-13));
  CHECK(norm_h2(cache, f) ==
        doctest::Approx(std::sqrt(1.0 + lambda + lambda * lambda) * l2).epsilon(1e-13));
  CHECK(norm_grad_laplacian(cache, f) ==
        doctest::Approx(std::pow(lambda, 1.5) * l2).epsilon(1e-13));
  // H^-1 of a mean-zero eigenfunction: ||f|| / sqrt(lambda).
  CHECK(norm_hminus1(cache, f) ==
        doctest::Approx(l2 / std::sqrt(lambda)).epsilon(1e-13));
}

TEST_CASE("forward transform is linear") {
  const Grid grid(2, 8, 1.0);
  const SpectrumCache cache(grid);
  const Field f = harness::random_initial_field(grid, 31, 1.0);
  const Field g = harness::random_initial_field(grid, 32, 1.0);
  const Spectrum sf = cache.forward(f);
  const Spectrum sg = cache.forward(g);
  const Spectrum sc = cache.forward(axpby(2.0, f, -3.0, g));
  double worst = 0.0;
  for (std::size_t m = 0; m < sc.size(); ++m) {
    worst = std::max(worst, std::abs(sc[m] - (2.0 * sf[m] - 3.0 * sg[m])));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("single linear mode follows the scalar two-step recurrence") {
  // For a tiny-amplitude single mode the nonlinear flux is O(eps^3) and
  // r/sqrt(E1) deviates from 1 by O(eps^2), so the scheme reduces per mode to
  //   (3/2 u^{k+1} - 2 u^k + 1/2 u^{k-1})/dt
  //     = -lambda [ (a + lambda^2) u^{k+1} - 2 lambda (2 u^k - u^{k-1}) ],
  // which a scalar recurrence reproduces.
  const double L = 2.0 * kPi;
  const Grid grid(2, 16, L);
  const SpectrumCache cache(grid);
  const ModelParams params(0.5, 0.0, grid);
  const double eps = 1e-6;
  const Field phi0 = Field::sample(grid, [&](double x, double, double) {
    return eps * std::cos(x);
  });

  const double dt = 0.01;
  const double lambda = 1.0;
  const double a = params.a;

  SavState state = init_state(cache, phi0, dt, params);
  const int steps = 20;
  for (int k = 0; k < steps; ++k) {
    StepResult res = step(cache, state, nullptr, false);
    state = std::move(res.state);
  }

  // Scalar reference: same ghost bootstrap, then the recurrence.
  double u_prev = (eps / 2.0) * (1.0 + dt * lambda * (a - 2.0 * lambda + lambda * lambda));
  double u_curr = eps / 2.0;
  for (int k = 0; k < steps; ++k) {
    const double ext = 2.0 * u_curr - u_prev;
    const double next = (2.0 * u_curr - 0.5 * u_prev + 2.0 * dt * lambda * lambda * ext) /
                        (1.5 + dt * lambda * (a + lambda * lambda));
    u_prev = u_curr;
    u_curr = next;
  }

  const Spectrum spec = cache.forward(state.phi_curr);
  // locate mode (1, 0)
  Complex got(0.0, 0.0);
  for (std::size_t m = 0; m < spec.size(); ++m) {
    if (cache.frequency(m, 0) == 1 && cache.frequency(m, 1) == 0) got = spec[m];
  }
  CHECK(std::abs(got - Complex(u_curr, 0.0)) < 1e-6 * std::abs(u_curr));
}
