#pragma once

#include <functional>
#include <span>
#include <stdexcept>

#include "spfc/energy.hpp"

namespace spfc {

// Two-level state of the BDF2 scheme.
struct SavState {
  Field phi_curr;
  Field phi_prev;
  double r_curr;
  double r_prev;
  double time;
  long step_index;
  double dt;
  ModelParams params;
};

struct StepDiagnostics {
  long step_index = 0;
  double time = 0.0;
  double mass = 0.0;             // mean of phi
  double r = 0.0;
  double lhs_coefficient = 0.0;  // scalar c of the rank-one solve, provably >= 1
  // The entries below are filled only when full diagnostics were requested.
  bool full = false;
  double e_total = 0.0;
  double e_e1 = 0.0;
  double e_modified = 0.0;
  double e_sav = 0.0;
  double r_drift = 0.0;  // |r - sqrt(E1(phi))|
  double h1_norm = 0.0;
  double h2_norm = 0.0;
  double grad_lap_norm = 0.0;
};

// Non-finite values appeared in the update (diagnosis: the run left the
// stability envelope, e.g. absurd dt on rough data).
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(long step_index, double time);
  long step_index() const { return step_index_; }
  double time() const { return time_; }

 private:
  long step_index_;
  double time_;
};

// Builds the two-level start state from a single initial field:
//   phi_prev = phi0 - dt * (Laplacian(mu(phi0)) + f(0))   (backward Euler "ghost"),
//   r_curr = sqrt(E1(phi0)), r_prev = sqrt(E1(phi_prev)).
// `forcing0`, when given, is the source term at t = 0; the ghost step must see
// the same right-hand side as the scheme or the bootstrap drops to first
// order.  mu keeps its unforced definition either way.
//
// The explicit backward extrapolation is accepted only while it keeps the
// auxiliary history sane: E1(phi_prev) <= 4 * E1(phi0), i.e. r_prev <= 2 *
// r_curr, so the extrapolated scalar 2 r^0 - r^{-1} stays non-negative.  On
// data with significant unresolved content the explicit rate is dominated by
// the stiffest modes (the backward flow it extrapolates is ill-posed there)
// and the bound fails; init_state then falls back to the constant history
// phi_prev = phi0 and lets the L-stable first step damp the rough content
// implicitly.  Smooth resolved data never triggers the fallback.
SavState init_state(const SpectrumCache& cache, const Field& phi0, double dt,
                    const ModelParams& params, const Field* forcing0 = nullptr);

struct StepResult {
  SavState state;
  StepDiagnostics diag;
};

// Advances one BDF2/SAV step.  `forcing`, when given, is a source term added
// to the phi equation (used by the manufactured-solution harness).  The step
// verifies its own update by substituting it back into the two scheme
// equations (per-mode in spectral space for the field equation); residuals
// beyond 1e-10 throw.  Non-finite updates throw BlowUpError.
StepResult step(const SpectrumCache& cache, const SavState& state,
                const Field* forcing = nullptr, bool full_diagnostics = true);

// Step-size change: collapses the history (phi_prev = phi_curr,
// r_prev = r_curr = sqrt(E1(phi_curr))), i.e. a cold restart of the two-level
// stencil at the current field, and installs the new dt.
SavState restart_with_dt(const SpectrumCache& cache, SavState state, double new_dt);

// Piecewise-constant step-size schedule: run with dt until t_end, then switch.
struct Segment {
  double t_end;
  double dt;
};

using Observer = std::function<void(long step_index, double time, const StepDiagnostics&)>;

struct RunOptions {
  // Full diagnostics + observer call every `cadence` steps (and on the final
  // step).  Intermediate steps compute light diagnostics only.
  long cadence = 1;
  // Invoked after every step with the new state and whatever diagnostics that
  // step computed (used for snapshotting and cheap per-step monitoring).
  std::function<void(const SavState&, const StepDiagnostics&)> on_state;
};

// Runs the schedule; restarts the stencil at every interior segment boundary
// (and before the first segment if its dt differs from state.dt).  Steps are
// taken with the segment's fixed dt until time >= t_end - dt/2.
SavState run(const SpectrumCache& cache, SavState state, std::span<const Segment> schedule,
             const RunOptions& options, const Observer& observer = {});

}  // namespace spfc
