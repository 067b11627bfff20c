#include "spfc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <random>

namespace spfc::harness {

Field random_initial_field(const Grid& grid, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  Field out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    // 53-bit uniform in [0, 1).
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    out[i] = amplitude * (2.0 * u - 1.0);
  }
  return out;
}

TraceWriter::TraceWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("TraceWriter: cannot open " + path);
  out_ << header() << '\n';
}

const char* TraceWriter::header() {
  return "step,time,mass,e_total,e_e1,e_modified,e_sav,r,r_drift,h2_norm,"
         "grad_lap_norm,lhs_coefficient";
}

void TraceWriter::write(const StepDiagnostics& diag) {
  char line[512];
  std::snprintf(line, sizeof(line),
                "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                diag.step_index, diag.time, diag.mass, diag.e_total, diag.e_e1,
                diag.e_modified, diag.e_sav, diag.r, diag.r_drift, diag.h2_norm,
                diag.grad_lap_norm, diag.lhs_coefficient);
  out_ << line << '\n';
  if (!out_) throw std::runtime_error("TraceWriter: write failed");
}

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

}  // namespace

ConvergenceResult run_convergence(const RunConfig& config, std::ostream* log,
                                  const Observer& per_step) {
  RunConfig cfg = config;
  cfg.mode = RunMode::Converge;
  cfg.validate();

  const Grid grid(2, cfg.n, 1.0);
  const SpectrumCache cache(grid);
  const ModelParams params(cfg.a, cfg.stabilization, grid);
  const Field exact_final = manufactured_solution(grid, cfg.t_final);

  // The ghost bootstrap must include the t = 0 forcing: without it the start
  // value carries an O(dt)*|f(0)| error and the whole run degrades to first
  // order.
  const Field forcing0 = manufactured_forcing(cache, 0.0, params);

  ConvergenceResult result;
  for (const int nt : cfg.nt_list) {
    const double dt = cfg.t_final / nt;
    SavState state =
        init_state(cache, manufactured_solution(grid, 0.0), dt, params, &forcing0);
    for (int k = 0; k < nt; ++k) {
      const Field forcing = manufactured_forcing(cache, state.time + dt, params);
      StepResult res = step(cache, state, &forcing, /*full_diagnostics=*/false);
      state = std::move(res.state);
      if (per_step) per_step(state.step_index, state.time, res.diag);
    }
    const Field diff = state.phi_curr - exact_final;
    ConvergenceRow row{nt, dt, norm_l2(diff), norm_linf(diff)};
    result.rows.push_back(row);
    if (log != nullptr) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "nt=%6d dt=%.6g err_l2=%.6e err_linf=%.6e", nt,
                    dt, row.err_l2, row.err_linf);
      *log << buf << '\n';
    }
  }

  std::vector<double> log_nt, log_l2, log_linf;
  for (const ConvergenceRow& row : result.rows) {
    log_nt.push_back(std::log(static_cast<double>(row.nt)));
    log_l2.push_back(std::log(std::max(row.err_l2, 1e-300)));
    log_linf.push_back(std::log(std::max(row.err_linf, 1e-300)));
  }
  if (result.rows.size() >= 2) {
    result.slope_l2 = fit_slope(log_nt, log_l2);
    result.slope_linf = fit_slope(log_nt, log_linf);
  }
  if (log != nullptr) {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "slope_l2=%.4f slope_linf=%.4f", result.slope_l2,
                  result.slope_linf);
    *log << buf << '\n';
  }
  return result;
}

SimulationResult run_simulation(const RunConfig& config, std::ostream* log,
                                const Observer& per_step) {
  RunConfig cfg = config;
  cfg.mode = RunMode::Simulate;
  cfg.validate();

  const Grid grid(cfg.dim, cfg.n, cfg.length);
  const SpectrumCache cache(grid);
  const ModelParams params(cfg.a, cfg.stabilization, grid);

  std::filesystem::create_directories(cfg.output_dir);
  const std::string trace_path =
      (std::filesystem::path(cfg.output_dir) / "trace.csv").string();
  TraceWriter trace(trace_path);

  std::vector<double> snapshot_times = cfg.snapshot_times;
  std::sort(snapshot_times.begin(), snapshot_times.end());
  std::size_t next_snapshot = 0;

  SimulationResult result;
  result.trace_path = trace_path;

  const Field phi0 = random_initial_field(grid, cfg.seed, cfg.init_amplitude);
  SavState state = init_state(cache, phi0, cfg.dt_schedule.front().dt, params);

  RunOptions options;
  options.cadence = cfg.trace_cadence;
  options.on_state = [&](const SavState& s, const StepDiagnostics& diag) {
    if (per_step) per_step(s.step_index, s.time, diag);
    while (next_snapshot < snapshot_times.size() &&
           s.time >= snapshot_times[next_snapshot] - 1e-9) {
      char name[64];
      std::snprintf(name, sizeof(name), "snapshot_t%g.bin",
                    snapshot_times[next_snapshot]);
      const std::string path = (std::filesystem::path(cfg.output_dir) / name).string();
      write_snapshot(path, s.phi_curr, s.time);
      result.snapshot_paths.push_back(path);
      ++next_snapshot;
    }
  };

  const Observer trace_observer = [&](long, double, const StepDiagnostics& diag) {
    trace.write(diag);
    result.final_diag = diag;
  };

  state = run(cache, std::move(state), cfg.dt_schedule, options, trace_observer);
  result.total_steps = state.step_index;
  result.final_time = state.time;

  if (log != nullptr) {
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "steps=%ld final_time=%.6g mass=%.3e e_total=%.10g r=%.10g",
                  result.total_steps, result.final_time, result.final_diag.mass,
                  result.final_diag.e_total, result.final_diag.r);
    *log << buf << '\n';
  }
  return result;
}

bool VerifyReport::all_pass() const {
  for (const CheckResult& check : checks) {
    if (!check.pass) return false;
  }
  return true;
}

}  // namespace spfc::harness
