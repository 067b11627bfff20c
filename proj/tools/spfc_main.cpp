// Command-line front end: converge | simulate | verify.
// Exit codes: 0 success, 1 invariant/acceptance failure, 2 blow-up,
// 3 config or I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "spfc/harness.hpp"

namespace {

using spfc::harness::RunConfig;
using spfc::harness::RunMode;

struct CliOverrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> n;
  std::optional<int> dim;
  std::optional<double> length;
  std::optional<double> a;
  std::optional<double> stabilization;
  std::optional<double> init_amplitude;
  std::optional<long> trace_cadence;
  std::optional<std::string> dt_schedule;
  std::optional<std::string> snapshot_times;
  std::optional<std::string> nt_list;
  std::optional<double> t_final;
};

void add_common_options(CLI::App& cmd, CliOverrides& opts) {
  cmd.add_option("--config", opts.config_path, "JSON config file (flat RunConfig fields)");
  cmd.add_option("--seed", opts.seed, "PRNG seed (64-bit)");
  cmd.add_option("--out", opts.out, "output directory");
  cmd.add_option("--n", opts.n, "grid points per axis");
  cmd.add_option("--dim", opts.dim, "space dimension (2 or 3)");
  cmd.add_option("--length", opts.length, "domain edge length");
  cmd.add_option("--a", opts.a, "linear coefficient a in (0, 1]");
  cmd.add_option("--stabilization", opts.stabilization, "stabilization coefficient A >= 0");
  cmd.add_option("--init-amplitude", opts.init_amplitude, "random start data amplitude");
  cmd.add_option("--trace-cadence", opts.trace_cadence, "trace rows every k steps");
  cmd.add_option("--dt-schedule", opts.dt_schedule, "piecewise dt: \"t:dt,t:dt\"");
  cmd.add_option("--snapshot-times", opts.snapshot_times, "snapshot times: \"t,t,...\"");
  cmd.add_option("--nt-list", opts.nt_list, "converge-mode step counts: \"n1,n2,...\"");
  cmd.add_option("--t-final", opts.t_final, "converge-mode horizon");
}

RunConfig build_config(const CliOverrides& opts, RunMode mode) {
  RunConfig config;
  if (!opts.config_path.empty()) config = spfc::harness::load_config(opts.config_path);
  config.mode = mode;
  if (opts.seed) config.seed = *opts.seed;
  if (opts.out) config.output_dir = *opts.out;
  if (opts.n) config.n = *opts.n;
  if (opts.dim) config.dim = *opts.dim;
  if (opts.length) config.length = *opts.length;
  if (opts.a) config.a = *opts.a;
  if (opts.stabilization) config.stabilization = *opts.stabilization;
  if (opts.init_amplitude) config.init_amplitude = *opts.init_amplitude;
  if (opts.trace_cadence) config.trace_cadence = *opts.trace_cadence;
  if (opts.dt_schedule) config.dt_schedule = spfc::harness::parse_schedule(*opts.dt_schedule);
  if (opts.snapshot_times) {
    config.snapshot_times = spfc::harness::parse_times(*opts.snapshot_times);
  }
  if (opts.nt_list) config.nt_list = spfc::harness::parse_ints(*opts.nt_list);
  if (opts.t_final) config.t_final = *opts.t_final;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier pseudo-spectral SAV-BDF2 solver for the square phase "
               "field crystal equation"};
  app.require_subcommand(1);

  CliOverrides opts;
  CLI::App* converge = app.add_subcommand("converge", "manufactured-solution "
                                          "time-refinement study");
  CLI::App* simulate = app.add_subcommand("simulate", "pattern-formation run with "
                                          "trace and snapshots");
  CLI::App* verify = app.add_subcommand("verify", "operator/oracle invariant battery");
  add_common_options(*converge, opts);
  add_common_options(*simulate, opts);
  add_common_options(*verify, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (converge->parsed()) {
      const RunConfig config = build_config(opts, RunMode::Converge);
      spfc::harness::run_convergence(config, &std::cout);
      return 0;
    }
    if (simulate->parsed()) {
      const RunConfig config = build_config(opts, RunMode::Simulate);
      spfc::harness::run_simulation(config, &std::cout);
      return 0;
    }
    const RunConfig config = build_config(opts, RunMode::Verify);
    const spfc::harness::VerifyReport report = spfc::harness::run_verify(config, &std::cout);
    if (!report.all_pass()) {
      std::cerr << "verify: some checks failed\n";
      return 1;
    }
    return 0;
  } catch (const spfc::BlowUpError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const spfc::harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const std::logic_error& e) {
    std::cerr << "invariant failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  }
}
