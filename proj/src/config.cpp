#include "spfc/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace spfc::harness {

namespace {

double parse_double(const std::string& text, const char* what) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": cannot parse number '" + text + "'");
  }
  if (pos != text.size()) {
    throw ConfigError(std::string(what) + ": trailing characters in '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

std::vector<Segment> parse_schedule(const std::string& text) {
  std::vector<Segment> schedule;
  for (const std::string& part : split(text, ',')) {
    const std::size_t colon = part.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("dt_schedule: expected 't:dt' in '" + part + "'");
    }
    schedule.push_back(Segment{parse_double(part.substr(0, colon), "dt_schedule"),
                               parse_double(part.substr(colon + 1), "dt_schedule")});
  }
  if (schedule.empty()) throw ConfigError("dt_schedule: empty");
  return schedule;
}

std::vector<double> parse_times(const std::string& text) {
  std::vector<double> times;
  for (const std::string& part : split(text, ',')) {
    if (part.empty()) continue;
    times.push_back(parse_double(part, "snapshot_times"));
  }
  return times;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> values;
  for (const std::string& part : split(text, ',')) {
    if (part.empty()) continue;
    const double v = parse_double(part, "nt_list");
    if (v != std::floor(v) || v <= 0.0 || v > 1e9) {
      throw ConfigError("nt_list: expected positive integer, got '" + part + "'");
    }
    values.push_back(static_cast<int>(v));
  }
  return values;
}

std::string mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::Converge:
      return "converge";
    case RunMode::Simulate:
      return "simulate";
    case RunMode::Verify:
      return "verify";
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("dim must be 2 or 3");
  if (n < 4) throw ConfigError("n must be at least 4");
  if (!(length > 0.0)) throw ConfigError("length must be positive");
  if (!(a > 0.0) || !(a <= 1.0)) throw ConfigError("a must lie in (0, 1]");
  if (!(stabilization >= 0.0)) throw ConfigError("stabilization must be >= 0");
  if (!(init_amplitude >= 0.0)) throw ConfigError("init_amplitude must be >= 0");
  if (trace_cadence < 1) throw ConfigError("trace_cadence must be >= 1");

  if (mode == RunMode::Simulate) {
    if (dt_schedule.empty()) throw ConfigError("dt_schedule must not be empty");
    double prev = 0.0;
    for (const Segment& seg : dt_schedule) {
      if (!(seg.dt > 0.0)) throw ConfigError("dt_schedule: dt must be positive");
      if (!(seg.t_end > prev)) {
        throw ConfigError("dt_schedule: segment end times must be strictly increasing");
      }
      prev = seg.t_end;
    }
    for (double t : snapshot_times) {
      if (!(t > 0.0) || t > dt_schedule.back().t_end + 1e-9) {
        throw ConfigError("snapshot_times must lie in (0, final time]");
      }
    }
  }
  if (mode == RunMode::Converge) {
    if (nt_list.empty()) throw ConfigError("nt_list must not be empty");
    for (int nt : nt_list) {
      if (nt < 2) throw ConfigError("nt_list entries must be >= 2");
    }
    if (!(t_final > 0.0)) throw ConfigError("t_final must be positive");
    if (dim != 2 || length != 1.0) {
      throw ConfigError("converge mode requires dim == 2 and length == 1");
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

  static const std::set<std::string> known = {
      "mode",           "dim",        "n",          "length",
      "a",              "stabilization", "dt_schedule", "seed",
      "init_amplitude", "snapshot_times", "output_dir",  "trace_cadence",
      "nt_list",        "t_final"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  RunConfig config;
  try {
    if (doc.contains("mode")) {
      const std::string m = doc["mode"].get<std::string>();
      if (m == "converge") {
        config.mode = RunMode::Converge;
      } else if (m == "simulate") {
        config.mode = RunMode::Simulate;
      } else if (m == "verify") {
        config.mode = RunMode::Verify;
      } else {
        throw ConfigError("unknown mode '" + m + "'");
      }
    }
    if (doc.contains("dim")) config.dim = doc["dim"].get<int>();
    if (doc.contains("n")) config.n = doc["n"].get<int>();
    if (doc.contains("length")) config.length = doc["length"].get<double>();
    if (doc.contains("a")) config.a = doc["a"].get<double>();
    if (doc.contains("stabilization")) {
      config.stabilization = doc["stabilization"].get<double>();
    }
    if (doc.contains("dt_schedule")) {
      config.dt_schedule = parse_schedule(doc["dt_schedule"].get<std::string>());
    }
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("init_amplitude")) {
      config.init_amplitude = doc["init_amplitude"].get<double>();
    }
    if (doc.contains("snapshot_times")) {
      config.snapshot_times = parse_times(doc["snapshot_times"].get<std::string>());
    }
    if (doc.contains("output_dir")) {
      config.output_dir = doc["output_dir"].get<std::string>();
    }
    if (doc.contains("trace_cadence")) {
      config.trace_cadence = doc["trace_cadence"].get<long>();
    }
    if (doc.contains("nt_list")) {
      config.nt_list = parse_ints(doc["nt_list"].get<std::string>());
    }
    if (doc.contains("t_final")) config.t_final = doc["t_final"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config field error in " + path + ": " + e.what());
  }
  return config;
}

}  // namespace spfc::harness
