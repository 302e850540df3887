#include "conslaw/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "conslaw/csv.hpp"

namespace conslaw {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(const std::string& what, int line) {
  throw ConfigError(what + " (line " + std::to_string(line) + ")");
}

double parse_double(std::string_view value, const std::string& key, int line) {
  double x = 0.0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || end != value.data() + value.size())
    fail("key '" + key + "': bad number '" + std::string(value) + "'", line);
  return x;
}

long long parse_int(std::string_view value, const std::string& key, int line) {
  long long x = 0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || end != value.data() + value.size())
    fail("key '" + key + "': bad integer '" + std::string(value) + "'", line);
  return x;
}

std::uint64_t parse_uint64(std::string_view value, const std::string& key,
                           int line) {
  std::uint64_t x = 0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || end != value.data() + value.size())
    fail("key '" + key + "': bad unsigned integer '" + std::string(value) + "'",
         line);
  return x;
}

LightColor parse_color(std::string_view value, const std::string& key, int line) {
  if (value == "green") return LightColor::green;
  if (value == "red") return LightColor::red;
  fail("key '" + key + "': expected green or red, got '" + std::string(value) +
           "'",
       line);
}

RunMode parse_mode(std::string_view value, int line) {
  if (value == "solve") return RunMode::solve;
  if (value == "certify") return RunMode::certify;
  if (value == "sweep") return RunMode::sweep;
  if (value == "gamma-check") return RunMode::gamma_check;
  fail("key 'mode': expected solve, certify, sweep or gamma-check, got '" +
           std::string(value) + "'",
       line);
}

std::vector<double> parse_double_list(std::string_view value,
                                      const std::string& key, int line) {
  std::vector<double> out;
  while (!value.empty()) {
    const std::size_t comma = value.find(',');
    std::string_view item = trim(value.substr(0, comma));
    if (item.empty()) fail("key '" + key + "': empty list entry", line);
    out.push_back(parse_double(item, key, line));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  if (out.empty()) fail("key '" + key + "': empty list", line);
  return out;
}

const char* color_name(LightColor c) {
  return c == LightColor::green ? "green" : "red";
}

void check_positive(double x, const char* what) {
  if (!(x > 0.0)) throw ConfigError(std::string(what) + " must be positive");
}

}  // namespace

std::string run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::solve: return "solve";
    case RunMode::certify: return "certify";
    case RunMode::sweep: return "sweep";
    case RunMode::gamma_check: return "gamma-check";
  }
  throw std::logic_error("run_mode_name: bad mode");
}

TrafficScenario RunConfig::scenario() const {
  TrafficScenario sc;
  sc.road_length = road_length_m;
  sc.max_density = max_density_cars_km / 1000.0;
  sc.inflow_rate = inflow_cars_h / 3600.0;
  sc.green_speed = green_speed_kmh / 3.6;
  sc.red_speed = red_speed_kmh / 3.6;
  sc.entry = LightSchedule(entry_initial, entry_first_switch_s, entry_green_s,
                           entry_red_s);
  sc.exit = LightSchedule(exit_initial, exit_first_switch_s, exit_green_s,
                          exit_red_s);
  sc.inflow_cycles = inflow_cycles;
  sc.horizon = horizon_s;
  sc.queue_window = queue_window_m;
  sc.record_dt = record_dt_s;
  return sc;
}

RunConfig parse_config_text(std::string_view text) {
  RunConfig cfg;
  bool have_mode = false;
  std::unordered_set<std::string> seen;

  int line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;

    const std::size_t hash = raw.find('#');
    std::string_view line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header", line_no);
      continue;  // sections are purely organizational
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key = value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key", line_no);
    if (value.empty()) fail("key '" + key + "': empty value", line_no);
    if (!seen.insert(key).second) fail("duplicate key '" + key + "'", line_no);

    if (key == "mode") {
      cfg.mode = parse_mode(value, line_no);
      have_mode = true;
    } else if (key == "out") {
      cfg.out_dir = std::string(value);
    } else if (key == "seed") {
      cfg.seed = parse_uint64(value, key, line_no);
    } else if (key == "cells") {
      const long long n = parse_int(value, key, line_no);
      if (n < 4 || n > 10000000) fail("key 'cells': out of range", line_no);
      cfg.cells = static_cast<int>(n);
    } else if (key == "cfl") {
      cfg.cfl = parse_double(value, key, line_no);
    } else if (key == "road_length_m") {
      cfg.road_length_m = parse_double(value, key, line_no);
    } else if (key == "max_density_cars_km") {
      cfg.max_density_cars_km = parse_double(value, key, line_no);
    } else if (key == "inflow_cars_h") {
      cfg.inflow_cars_h = parse_double(value, key, line_no);
    } else if (key == "green_speed_kmh") {
      cfg.green_speed_kmh = parse_double(value, key, line_no);
    } else if (key == "red_speed_kmh") {
      cfg.red_speed_kmh = parse_double(value, key, line_no);
    } else if (key == "entry_initial") {
      cfg.entry_initial = parse_color(value, key, line_no);
    } else if (key == "entry_first_switch_s") {
      cfg.entry_first_switch_s = parse_double(value, key, line_no);
    } else if (key == "entry_green_s") {
      cfg.entry_green_s = parse_double(value, key, line_no);
    } else if (key == "entry_red_s") {
      cfg.entry_red_s = parse_double(value, key, line_no);
    } else if (key == "exit_initial") {
      cfg.exit_initial = parse_color(value, key, line_no);
    } else if (key == "exit_first_switch_s") {
      cfg.exit_first_switch_s = parse_double(value, key, line_no);
    } else if (key == "exit_green_s") {
      cfg.exit_green_s = parse_double(value, key, line_no);
    } else if (key == "exit_red_s") {
      cfg.exit_red_s = parse_double(value, key, line_no);
    } else if (key == "inflow_cycles") {
      cfg.inflow_cycles = parse_double(value, key, line_no);
    } else if (key == "horizon_s") {
      cfg.horizon_s = parse_double(value, key, line_no);
    } else if (key == "queue_window_m") {
      cfg.queue_window_m = parse_double(value, key, line_no);
    } else if (key == "record_dt_s") {
      cfg.record_dt_s = parse_double(value, key, line_no);
    } else if (key == "sweep_speeds_kmh") {
      cfg.sweep_speeds_kmh = parse_double_list(value, key, line_no);
    } else if (key == "profile_record_dt_s") {
      cfg.profile_record_dt_s = parse_double(value, key, line_no);
    } else if (key == "certify_record_dt_s") {
      cfg.certify_record_dt_s = parse_double(value, key, line_no);
    } else if (key == "entropy_levels") {
      const long long n = parse_int(value, key, line_no);
      if (n < 1 || n > 10000) fail("key 'entropy_levels': out of range", line_no);
      cfg.entropy_levels = static_cast<int>(n);
    } else if (key == "entropy_tiles") {
      const long long n = parse_int(value, key, line_no);
      if (n < 1 || n > 1000) fail("key 'entropy_tiles': out of range", line_no);
      cfg.entropy_tiles = static_cast<int>(n);
    } else if (key == "stability_checks") {
      const long long n = parse_int(value, key, line_no);
      if (n < 0 || n > 1000) fail("key 'stability_checks': out of range", line_no);
      cfg.stability_checks = static_cast<int>(n);
    } else if (key == "gamma_horizon_s") {
      cfg.gamma_horizon_s = parse_double(value, key, line_no);
    } else {
      fail("unknown key '" + key + "'", line_no);
    }
  }

  if (!have_mode)
    throw ConfigError(
        "missing required key: mode (solve, certify, sweep or gamma-check)");

  if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0)
    throw ConfigError("cfl must lie in (0, 1]");
  check_positive(cfg.road_length_m, "road_length_m");
  check_positive(cfg.max_density_cars_km, "max_density_cars_km");
  if (cfg.inflow_cars_h < 0.0) throw ConfigError("inflow_cars_h must be >= 0");
  check_positive(cfg.green_speed_kmh, "green_speed_kmh");
  check_positive(cfg.red_speed_kmh, "red_speed_kmh");
  check_positive(cfg.entry_first_switch_s, "entry_first_switch_s");
  check_positive(cfg.entry_green_s, "entry_green_s");
  check_positive(cfg.entry_red_s, "entry_red_s");
  check_positive(cfg.exit_first_switch_s, "exit_first_switch_s");
  check_positive(cfg.exit_green_s, "exit_green_s");
  check_positive(cfg.exit_red_s, "exit_red_s");
  if (cfg.inflow_cycles < 0.0) throw ConfigError("inflow_cycles must be >= 0");
  check_positive(cfg.horizon_s, "horizon_s");
  check_positive(cfg.record_dt_s, "record_dt_s");
  check_positive(cfg.profile_record_dt_s, "profile_record_dt_s");
  check_positive(cfg.certify_record_dt_s, "certify_record_dt_s");
  check_positive(cfg.gamma_horizon_s, "gamma_horizon_s");
  if (!(cfg.queue_window_m > 0.0) || cfg.queue_window_m > cfg.road_length_m)
    throw ConfigError("queue_window_m must lie in (0, road_length_m]");
  for (double v : cfg.sweep_speeds_kmh)
    if (!(v > 0.0)) throw ConfigError("sweep_speeds_kmh entries must be positive");
  if (cfg.gamma_horizon_s > cfg.horizon_s)
    throw ConfigError("gamma_horizon_s must not exceed horizon_s");

  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void validate_feasibility(const RunConfig& cfg) {
  const double density = cfg.max_density_cars_km / 1000.0;  // cars/m
  const auto check_speed = [&](double kmh) {
    const double capacity = (kmh / 3.6) * density / 4.0;  // cars/s
    const double inflow = cfg.inflow_cars_h / 3600.0;
    if (inflow > capacity * (1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "speed " << format_double(kmh) << " km/h cannot carry the demand: "
          << "capacity " << format_double(capacity * 3600.0)
          << " cars/h < inflow " << format_double(cfg.inflow_cars_h)
          << " cars/h";
      throw ConfigError(msg.str());
    }
  };
  check_speed(cfg.green_speed_kmh);
  if (cfg.mode == RunMode::sweep) {
    for (double v : cfg.sweep_speeds_kmh) check_speed(v);
  } else {
    check_speed(cfg.red_speed_kmh);
  }
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  const auto put = [&](const char* key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  const auto putd = [&](const char* key, double value) {
    put(key, format_double(value));
  };

  put("mode", run_mode_name(cfg.mode));
  put("seed", std::to_string(cfg.seed));
  put("cells", std::to_string(cfg.cells));
  putd("cfl", cfg.cfl);
  putd("road_length_m", cfg.road_length_m);
  putd("max_density_cars_km", cfg.max_density_cars_km);
  putd("inflow_cars_h", cfg.inflow_cars_h);
  putd("green_speed_kmh", cfg.green_speed_kmh);
  putd("red_speed_kmh", cfg.red_speed_kmh);
  put("entry_initial", color_name(cfg.entry_initial));
  putd("entry_first_switch_s", cfg.entry_first_switch_s);
  putd("entry_green_s", cfg.entry_green_s);
  putd("entry_red_s", cfg.entry_red_s);
  put("exit_initial", color_name(cfg.exit_initial));
  putd("exit_first_switch_s", cfg.exit_first_switch_s);
  putd("exit_green_s", cfg.exit_green_s);
  putd("exit_red_s", cfg.exit_red_s);
  putd("inflow_cycles", cfg.inflow_cycles);
  putd("horizon_s", cfg.horizon_s);
  putd("queue_window_m", cfg.queue_window_m);
  putd("record_dt_s", cfg.record_dt_s);
  {
    std::string list;
    for (std::size_t i = 0; i < cfg.sweep_speeds_kmh.size(); ++i) {
      if (i) list += ",";
      list += format_double(cfg.sweep_speeds_kmh[i]);
    }
    put("sweep_speeds_kmh", list);
  }
  putd("profile_record_dt_s", cfg.profile_record_dt_s);
  putd("certify_record_dt_s", cfg.certify_record_dt_s);
  put("entropy_levels", std::to_string(cfg.entropy_levels));
  put("entropy_tiles", std::to_string(cfg.entropy_tiles));
  put("stability_checks", std::to_string(cfg.stability_checks));
  putd("gamma_horizon_s", cfg.gamma_horizon_s);
  return out.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string text = serialize_config(cfg);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace conslaw
