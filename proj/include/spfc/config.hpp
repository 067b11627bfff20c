#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spfc/stepper.hpp"

namespace spfc::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { Converge, Simulate, Verify };

// Flat run configuration; JSON file fields share these names, and the CLI can
// override any of them.
struct RunConfig {
  RunMode mode = RunMode::Simulate;
  int dim = 2;
  int n = 128;
  double length = 100.0;
  double a = 0.5;
  double stabilization = 0.0;
  std::vector<Segment> dt_schedule = {{200.0, 0.01}};
  std::uint64_t seed = 1;
  double init_amplitude = 0.05;
  std::vector<double> snapshot_times;
  std::string output_dir = "out";
  long trace_cadence = 1;
  // Converge-mode sweep: step counts for the fixed horizon t_final.
  std::vector<int> nt_list = {100, 200, 400, 800};
  double t_final = 1.0;

  void validate() const;  // throws ConfigError
};

// Reads a flat JSON object; unknown keys are rejected (typo safety).
RunConfig load_config(const std::string& path);

// "t:dt,t:dt,..." with strictly increasing t.
std::vector<Segment> parse_schedule(const std::string& text);
// "t1,t2,..."
std::vector<double> parse_times(const std::string& text);
// "n1,n2,..."
std::vector<int> parse_ints(const std::string& text);

std::string mode_name(RunMode mode);

}  // namespace spfc::harness
