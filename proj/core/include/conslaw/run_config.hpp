#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conslaw/traffic.hpp"

namespace conslaw {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { solve, certify, sweep, gamma_check };

std::string run_mode_name(RunMode mode);

/// Fully resolved run description. Parsed from a flat key = value file
/// (# comments and [section] headers allowed). Scenario quantities are kept
/// in the road units of the file (km/h, cars/km, cars/h); scenario() converts
/// to SI. Keeping the file units makes serialize_config an exact fixed point
/// of parsing.
struct RunConfig {
  RunMode mode = RunMode::solve;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int cells = 500;
  double cfl = 0.9;

  double road_length_m = 250.0;
  double max_density_cars_km = 200.0;
  double inflow_cars_h = 2000.0;
  double green_speed_kmh = 60.0;
  double red_speed_kmh = 40.0;
  LightColor entry_initial = LightColor::green;
  double entry_first_switch_s = 39.0;
  double entry_green_s = 39.0;
  double entry_red_s = 27.0;
  LightColor exit_initial = LightColor::green;
  double exit_first_switch_s = 12.0;
  double exit_green_s = 30.0;
  double exit_red_s = 45.0;
  double inflow_cycles = 3.0;
  double horizon_s = 1200.0;
  double queue_window_m = 100.0;
  double record_dt_s = 0.5;

  std::vector<double> sweep_speeds_kmh{40, 45, 50, 55, 60, 65, 70};

  double profile_record_dt_s = 5.0;  // solve-mode output spacing
  double certify_record_dt_s = 5.0;  // certificate record spacing
  int entropy_levels = 17;
  int entropy_tiles = 4;
  int stability_checks = 3;
  double gamma_horizon_s = 120.0;  // time-rescaling cross-check horizon

  TrafficScenario scenario() const;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::string& path);

/// Every speed the run will use must carry the demanded inflow; throws
/// ConfigError naming the first speed that cannot.
void validate_feasibility(const RunConfig& config);

/// Canonical key = value rendering of everything that affects the results
/// (the output directory is excluded on purpose). Parsing it back yields the
/// same configuration byte for byte.
std::string serialize_config(const RunConfig& config);

/// FNV-1a over serialize_config(config).
std::uint64_t config_hash(const RunConfig& config);

}  // namespace conslaw
