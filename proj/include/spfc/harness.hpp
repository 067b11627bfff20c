#pragma once

#include <fstream>
#include <iosfwd>
#include <string>

#include "spfc/config.hpp"
#include "spfc/manufactured.hpp"
#include "spfc/oracle.hpp"
#include "spfc/snapshot.hpp"

namespace spfc::harness {

// Uniform random start data amplitude * (2u - 1), u ~ U[0,1) drawn from
// mt19937_64 via the 53-bit mantissa map (x >> 11) * 2^-53; fully determined
// by the seed.
Field random_initial_field(const Grid& grid, std::uint64_t seed, double amplitude);

// CSV trace of per-step diagnostics, %.17g throughout.  Light rows (cadence
// misses) are not written; every written row is complete.
class TraceWriter {
 public:
  explicit TraceWriter(const std::string& path);
  void write(const StepDiagnostics& diag);
  static const char* header();

 private:
  std::ofstream out_;
};

struct ConvergenceRow {
  int nt = 0;
  double dt = 0.0;
  double err_l2 = 0.0;
  double err_linf = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  // Least-squares slopes of log(err) vs log(nt); -2 means second order.
  double slope_l2 = 0.0;
  double slope_linf = 0.0;
};

// Manufactured-solution time refinement study at fixed n: runs the forced
// scheme to t_final for each nt in config.nt_list and measures the final-time
// error against the exact solution.  `per_step`, when set, sees every step's
// light diagnostics.
ConvergenceResult run_convergence(const RunConfig& config, std::ostream* log = nullptr,
                                  const Observer& per_step = {});

struct SimulationResult {
  long total_steps = 0;
  double final_time = 0.0;
  StepDiagnostics final_diag;
  std::string trace_path;
  std::vector<std::string> snapshot_paths;
};

// Full pattern-formation run: random start data, dt schedule with stencil
// restarts at segment boundaries, CSV trace at the configured cadence, binary
// snapshots at the configured times (written at the first step whose time
// reaches each snapshot time).
SimulationResult run_simulation(const RunConfig& config, std::ostream* log = nullptr,
                                const Observer& per_step = {});

struct CheckResult {
  std::string name;
  double measured = 0.0;   // residual or margin, see `kind`
  double tolerance = 0.0;  // bound on the residual (or lower bound on margin)
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

// Invariant battery on small grids (n in {4, 5, 8}): operator identities,
// dual-route agreement with the dense oracle, and short-run scheme
// guarantees.  Independent of any long simulation.
VerifyReport run_verify(const RunConfig& config, std::ostream* log = nullptr);

// Reusable measurement helpers (also used by the acceptance gate).
namespace checks {

// Max relative mismatch between each dense operator matrix action and the FFT
// pipeline on `samples` random fields.  `nyquist` selects the dense matrix's
// first-derivative convention; note the Kept matrix differs from Zeroed only
// in its imaginary part, so the real-restricted action agrees either way.
double operator_agreement(const SpectrumCache& cache, oracle::OperatorKind kind,
                          double a, double dt, std::uint64_t seed, int samples,
                          oracle::NyquistMode nyquist = oracle::NyquistMode::Zeroed);

struct StepAgreement {
  double max_rel_diff = 0.0;        // phi in relative L2, r relative
  double max_dense_residual = 0.0;  // backward error of the dense solves
};

// Compares step() with oracle::dense_step on `samples` random two-level states.
StepAgreement step_agreement(const SpectrumCache& cache, double a, double dt,
                             std::uint64_t seed, int samples);

// Random two-level state with consistent means, r_curr = sqrt(E1(phi_curr))
// and a slightly offset r_prev (exercises the full BDF2 stencil).
SavState random_state(const SpectrumCache& cache, double a, double dt,
                      std::uint64_t seed, double amplitude);

}  // namespace checks

}  // namespace spfc::harness
