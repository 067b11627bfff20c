#include "spfc/oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spfc::oracle {

namespace {

void require_dense_grid(const Grid& grid) {
  if (grid.dim != 2 || grid.n > 12) {
    throw std::invalid_argument("dense oracle supports dim == 2 and n <= 12 only");
  }
}

// Signed frequency of axis position idx, with the even-n Nyquist either zeroed
// (first-derivative convention) or kept as +n/2.
int signed_freq(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }

struct Mode {
  int fx;
  int fy;
  double kx;       // 2*pi*fx/L, possibly Nyquist-zeroed for derivatives
  double ky;
  double lambda;   // full |k|^2, Nyquist always kept
};

std::vector<Mode> enumerate_modes(const Grid& grid, NyquistMode nyquist) {
  const int n = grid.n;
  const double base = 2.0 * std::numbers::pi / grid.length;
  std::vector<Mode> modes;
  modes.reserve(grid.size());
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      Mode m;
      m.fx = signed_freq(ix, n);
      m.fy = signed_freq(iy, n);
      const double kx_full = base * m.fx;
      const double ky_full = base * m.fy;
      m.lambda = kx_full * kx_full + ky_full * ky_full;
      const bool zero_x = nyquist == NyquistMode::Zeroed && n % 2 == 0 && ix == n / 2;
      const bool zero_y = nyquist == NyquistMode::Zeroed && n % 2 == 0 && iy == n / 2;
      m.kx = zero_x ? 0.0 : kx_full;
      m.ky = zero_y ? 0.0 : ky_full;
      modes.push_back(m);
    }
  }
  return modes;
}

}  // namespace

DenseOperator::DenseOperator(std::size_t size, std::vector<Complex> entries)
    : size_(size), entries_(std::move(entries)) {
  if (entries_.size() != size_ * size_) {
    throw std::invalid_argument("DenseOperator: entry count mismatch");
  }
}

std::vector<double> DenseOperator::apply(std::span<const double> v) const {
  if (v.size() != size_) throw std::invalid_argument("DenseOperator: size mismatch");
  std::vector<double> out(size_, 0.0);
  for (std::size_t r = 0; r < size_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < size_; ++c) acc += entry(r, c).real() * v[c];
    out[r] = acc;
  }
  return out;
}

double DenseOperator::max_abs_imag() const {
  double m = 0.0;
  for (const Complex& e : entries_) m = std::max(m, std::abs(e.imag()));
  return m;
}

DenseOperator dense_operator(OperatorKind kind, const Grid& grid,
                             const DenseParams& params, NyquistMode nyquist) {
  require_dense_grid(grid);
  const int n = grid.n;
  const std::size_t total = grid.size();
  const std::vector<Mode> modes = enumerate_modes(grid, nyquist);

  auto symbol = [&](const Mode& m) -> Complex {
    switch (kind) {
      case OperatorKind::GradX:
        return Complex(0.0, m.kx);
      case OperatorKind::GradY:
        return Complex(0.0, m.ky);
      case OperatorKind::Laplacian:
        return Complex(-m.lambda, 0.0);
      case OperatorKind::Biharmonic:
        return Complex(m.lambda * m.lambda, 0.0);
      case OperatorKind::LN:
        return Complex(params.a + m.lambda * m.lambda, 0.0);
      case OperatorKind::AN:
        return Complex(1.5 + params.dt * m.lambda * (params.a + m.lambda * m.lambda) +
                           params.stabilization * params.dt * params.dt * m.lambda *
                               m.lambda,
                       0.0);
    }
    throw std::logic_error("dense_operator: unknown kind");
  };

  // n-th roots of unity; exp(i k.(x_r - x_c)) only involves exp(2 pi i j / n).
  std::vector<Complex> roots(n);
  for (int j = 0; j < n; ++j) {
    const double angle = 2.0 * std::numbers::pi * j / n;
    roots[j] = Complex(std::cos(angle), std::sin(angle));
  }
  auto root_pow = [&](int freq, int delta) -> const Complex& {
    return roots[((freq * delta) % n + n) % n];
  };

  std::vector<Complex> entries(total * total, Complex(0.0, 0.0));
  for (std::size_t row = 0; row < total; ++row) {
    const int rx = static_cast<int>(row) % n;
    const int ry = static_cast<int>(row) / n;
    for (std::size_t col = 0; col < total; ++col) {
      const int dx = rx - (static_cast<int>(col) % n);
      const int dy = ry - (static_cast<int>(col) / n);
      Complex acc(0.0, 0.0);
      for (const Mode& m : modes) {
        acc += symbol(m) * root_pow(m.fx, dx) * root_pow(m.fy, dy);
      }
      entries[row * total + col] = acc / static_cast<double>(total);
    }
  }
  return DenseOperator(total, std::move(entries));
}

namespace {

struct DenseWork {
  Grid grid;
  DenseOperator grad_x;
  DenseOperator grad_y;
  DenseOperator laplacian;

  explicit DenseWork(const Grid& g)
      : grid(g),
        grad_x(dense_operator(OperatorKind::GradX, g)),
        grad_y(dense_operator(OperatorKind::GradY, g)),
        laplacian(dense_operator(OperatorKind::Laplacian, g)) {}
};

std::vector<double> grad_squared_dense(const DenseWork& w, std::span<const double> phi) {
  const std::vector<double> gx = w.grad_x.apply(phi);
  const std::vector<double> gy = w.grad_y.apply(phi);
  std::vector<double> s(phi.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = gx[i] * gx[i] + gy[i] * gy[i];
  return s;
}

double energy_e1_dense(const DenseWork& w, std::span<const double> phi) {
  const std::vector<double> s = grad_squared_dense(w, phi);
  const double h = w.grid.spacing();
  double acc = 0.0;
  for (double si : s) acc += 0.25 * si * si - si + 2.0;
  return h * h * acc;
}

std::vector<double> nonlinear_mu_dense(const DenseWork& w, std::span<const double> phi) {
  const std::vector<double> gx = w.grad_x.apply(phi);
  const std::vector<double> gy = w.grad_y.apply(phi);
  std::vector<double> fx(phi.size()), fy(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double s = gx[i] * gx[i] + gy[i] * gy[i];
    fx[i] = s * gx[i];
    fy[i] = s * gy[i];
  }
  const std::vector<double> div_x = w.grad_x.apply(fx);
  const std::vector<double> div_y = w.grad_y.apply(fy);
  const std::vector<double> lap = w.laplacian.apply(phi);
  std::vector<double> mu(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    mu[i] = -(div_x[i] + div_y[i]) + 2.0 * lap[i];
  }
  return mu;
}

}  // namespace

double dense_energy_e1(const Grid& grid, std::span<const double> phi) {
  require_dense_grid(grid);
  return energy_e1_dense(DenseWork(grid), phi);
}

std::vector<double> dense_nonlinear_mu(const Grid& grid, std::span<const double> phi) {
  require_dense_grid(grid);
  return nonlinear_mu_dense(DenseWork(grid), phi);
}

DenseStepResult dense_step(const SavState& state, const Field* forcing) {
  const Grid& grid = state.phi_curr.grid();
  require_dense_grid(grid);
  if (!(state.dt > 0.0)) throw std::invalid_argument("dense_step: dt must be > 0");
  if (forcing != nullptr && !(forcing->grid() == grid)) {
    throw std::invalid_argument("dense_step: forcing grid mismatch");
  }

  const std::size_t total = grid.size();
  const double dt = state.dt;
  const double a = state.params.a;
  const double A = state.params.stabilization;
  const double h2 = grid.spacing() * grid.spacing();

  const DenseWork w(grid);

  // Extrapolation and the frozen nonlinear data of the step.
  std::vector<double> ext(total);
  for (std::size_t i = 0; i < total; ++i) {
    ext[i] = 2.0 * state.phi_curr[i] - state.phi_prev[i];
  }
  const double e1_hat = energy_e1_dense(w, ext);
  const double s_n = 1.0 / std::sqrt(e1_hat);
  const std::vector<double> n_hat = nonlinear_mu_dense(w, ext);

  using Matrix = Eigen::MatrixXd;
  using Vector = Eigen::VectorXd;

  Matrix lap(total, total);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < total; ++c) lap(r, c) = w.laplacian.entry(r, c).real();
  }
  const DenseOperator ln_op = dense_operator(OperatorKind::LN, grid, {a, dt, A});
  Matrix ln(total, total);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < total; ++c) ln(r, c) = ln_op.entry(r, c).real();
  }

  // Coupled system in u = (phi_new, r_new):
  //   [3/2 I - dt Lap Ln + A dt^2 Lap^2] phi_new - dt s_n (Lap n_hat) r_new
  //     = 2 phi^n - phi^{n-1}/2 + A dt^2 Lap^2 phi^n + dt f
  //   -(3/4) s_n h^2 n_hat . phi_new + 3/2 r_new
  //     = 2 r^n - r^{n-1}/2 + (s_n/2) <n_hat, -2 phi^n + phi^{n-1}/2>
  Matrix sys = Matrix::Zero(total + 1, total + 1);
  const Matrix lap_sq = lap * lap;
  sys.topLeftCorner(total, total) =
      1.5 * Matrix::Identity(total, total) - dt * lap * ln + A * dt * dt * lap_sq;

  Vector n_vec(total);
  for (std::size_t i = 0; i < total; ++i) n_vec(i) = n_hat[i];
  sys.topRightCorner(total, 1) = -dt * s_n * (lap * n_vec);
  sys.bottomLeftCorner(1, total) = (-0.75 * s_n * h2) * n_vec.transpose();
  sys(total, total) = 1.5;

  Vector rhs(total + 1);
  Vector phi_n(total);
  for (std::size_t i = 0; i < total; ++i) phi_n(i) = state.phi_curr[i];
  Vector stab_rhs = A * dt * dt * (lap_sq * phi_n);
  for (std::size_t i = 0; i < total; ++i) {
    rhs(i) = 2.0 * state.phi_curr[i] - 0.5 * state.phi_prev[i] + stab_rhs(i);
    if (forcing != nullptr) rhs(i) += dt * (*forcing)[i];
  }
  double hist = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    hist += n_hat[i] * (-2.0 * state.phi_curr[i] + 0.5 * state.phi_prev[i]);
  }
  rhs(total) = 2.0 * state.r_curr - 0.5 * state.r_prev + 0.5 * s_n * h2 * hist;

  const Vector u = sys.partialPivLu().solve(rhs);
  const double residual = (sys * u - rhs).norm() / (sys.norm() * u.norm() + rhs.norm());

  Field phi_new(grid);
  for (std::size_t i = 0; i < total; ++i) phi_new[i] = u(i);
  return DenseStepResult{std::move(phi_new), u(total), residual};
}

}  // namespace spfc::oracle
