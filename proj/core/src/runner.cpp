#include "conslaw/runner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "conslaw/certificates.hpp"
#include "conslaw/csv.hpp"

namespace conslaw {

namespace {

namespace fs = std::filesystem;

std::string out_file(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

void write_manifest(const RunConfig& cfg, RunResult& result) {
  std::ofstream f(out_file(cfg, "manifest.txt"), std::ios::binary);
  if (!f) throw std::runtime_error("cannot write manifest.txt");
  std::ostringstream hash;
  hash << std::hex;
  hash.fill('0');
  hash.width(16);
  hash << config_hash(cfg);
  f << "config_hash = 0x" << hash.str() << "\n" << serialize_config(cfg);
  result.artifacts.push_back("manifest.txt");
}

void write_error_file(const RunConfig& cfg, RunResult& result,
                      const std::string& type, const std::string& message) {
  std::ofstream f(out_file(cfg, "error.txt"), std::ios::binary);
  if (!f) return;  // best effort: the error also travels in RunResult
  f << "error_type = " << type << "\n" << "message = " << message << "\n";
  result.artifacts.push_back("error.txt");
}

// 0, dt, 2 dt, ... capped strictly below T, then T itself.
std::vector<double> uniform_records(double T, double dt) {
  if (T / dt > 2e7) throw ConfigError("record spacing too small for horizon");
  std::vector<double> t;
  const int n = std::max(1, static_cast<int>(std::floor(T / dt + 1e-9)));
  for (int i = 0; i < n; ++i)
    if (i * dt < T) t.push_back(i * dt);
  t.push_back(T);
  return t;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void run_solve(const RunConfig& cfg, RunResult& result) {
  const TrafficScenario sc = cfg.scenario();
  IBVPProblem problem = build_problem(sc);

  SolverConfig scfg;
  scfg.cfl = cfg.cfl;
  scfg.record_times = uniform_records(sc.horizon, cfg.profile_record_dt_s);
  const GridSpec grid = GridSpec::covering(problem.space_domain(), cfg.cells);
  const SolutionField field = solve(problem, grid, scfg);

  CsvWriter csv(out_file(cfg, "profile.csv"), {"t", "x", "u"});
  for (std::size_t i = 0; i < field.times.size(); ++i)
    for (int j = 0; j < grid.n_cells; ++j)
      csv.numeric_row(std::array{field.times[i], grid.center(j),
                                 field.profiles[i][static_cast<std::size_t>(j)]});
  result.artifacts.push_back("profile.csv");
}

void run_sweep(const RunConfig& cfg, RunResult& result) {
  const TrafficScenario base = cfg.scenario();
  const auto rows =
      sweep_speed_limits(base, cfg.sweep_speeds_kmh, cfg.cells, cfg.cfl);

  CsvWriter csv(out_file(cfg, "sweep.csv"),
                {"red_speed_kmh", "congestion", "total_discharge",
                 "emptying_time"});
  for (const SweepRow& r : rows)
    csv.numeric_row(std::array{r.red_speed_kmh, r.congestion, r.total_discharge,
                               r.emptying_time});
  result.artifacts.push_back("sweep.csv");
}

void run_gamma_check(const RunConfig& cfg, RunResult& result) {
  TrafficScenario sc = cfg.scenario();
  sc.horizon = std::min(cfg.gamma_horizon_s, sc.horizon);
  IBVPProblem problem = build_problem(sc);

  SolverConfig scfg;
  scfg.cfl = cfg.cfl;
  for (int i = 0; i <= 4; ++i) scfg.record_times.push_back(sc.horizon * i / 4.0);

  std::vector<int> levels{std::max(cfg.cells / 4, 4), std::max(cfg.cells / 2, 4),
                          cfg.cells};
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  CsvWriter csv(out_file(cfg, "gamma_check.csv"), {"cells", "dx", "l1_gap",
                                                   "mass"});
  for (int n : levels) {
    const GridSpec grid = GridSpec::covering(problem.space_domain(), n);
    const SolutionField direct = solve(problem, grid, scfg);
    const SolutionField rescaled = solve_via_time_rescaling(problem, grid, scfg);
    double gap = 0.0;
    for (std::size_t i = 0; i < direct.times.size(); ++i)
      gap = std::max(gap, l1_profile_distance(direct.profiles[i],
                                              rescaled.profiles[i], grid.dx()));
    csv.numeric_row(std::array{static_cast<double>(n), grid.dx(), gap,
                               direct.mass_at(direct.times.size() - 1)});
  }
  result.artifacts.push_back("gamma_check.csv");
}

double allowance_rule(double e_coarse, double e_fine, double floor) {
  // Passes on the fine level iff the excess clearly shrinks under refinement
  // (rate at least ~Delta x^(1/3)); a persistent excess keeps only the floor.
  return floor + 4.0 * std::max(e_coarse - e_fine, 0.0);
}

double report_empirical(const std::vector<CertificateReport>& reports,
                        const std::string& check) {
  for (const CertificateReport& r : reports)
    if (r.check == check) return r.empirical;
  throw std::logic_error("missing certificate: " + check);
}

CertificateReport make_spot_report(std::string name, double bound,
                                   double empirical) {
  CertificateReport r;
  r.check = std::move(name);
  r.bound = bound;
  r.empirical = empirical;
  r.margin = bound - empirical;
  r.pass = empirical <= bound;
  return r;
}

StepFunction perturbed_steps(const StepFunction& base, std::mt19937_64& rng,
                             double amplitude, Interval clamp_to) {
  std::vector<double> breakpoints(base.edges().begin() + 1,
                                  base.edges().end() - 1);
  std::vector<double> values(base.values().begin(), base.values().end());
  for (double& v : values) {
    v += amplitude * (uniform01(rng) - 0.5);
    v = std::clamp(v, clamp_to.lo, clamp_to.hi);
  }
  return StepFunction(base.domain_lo(), base.domain_hi(), std::move(breakpoints),
                      std::move(values));
}

int run_certify(const RunConfig& cfg, RunResult& result) {
  const TrafficScenario sc = cfg.scenario();
  IBVPProblem problem = build_problem(sc);
  const double T = problem.horizon();

  SolverConfig scfg;
  scfg.cfl = cfg.cfl;
  scfg.record_times = uniform_records(T, cfg.certify_record_dt_s);

  const GridSpec grid_fine = GridSpec::covering(problem.space_domain(), cfg.cells);
  const GridSpec grid_coarse =
      GridSpec::covering(problem.space_domain(), std::max(cfg.cells / 2, 4));
  const SolutionField fine = solve(problem, grid_fine, scfg);
  const SolutionField coarse = solve(problem, grid_coarse, scfg);

  // Calibrate the discretization allowances on the refinement pair: excesses
  // that shrink under refinement are discretization error and are granted
  // four times the observed drop; a persistent excess fails.
  const CertificateAllowances probe{};
  const auto reports_fine = run_certificates(fine, problem, probe);
  const auto reports_coarse = run_certificates(coarse, problem, probe);

  const double tv_scale = std::max(1.0, problem.tv_functional(T));
  const double l1_scale =
      std::max(1.0, problem.tv_functional(T) * problem.max_wave_speed() *
                        cfg.certify_record_dt_s);

  CertificateAllowances allow;
  allow.tv_excess = allowance_rule(
      std::max(report_empirical(reports_coarse, "tv"), 0.0),
      std::max(report_empirical(reports_fine, "tv"), 0.0), 1e-9 * tv_scale);
  allow.l1_time_excess = allowance_rule(
      std::max(report_empirical(reports_coarse, "l1_time"), 0.0),
      std::max(report_empirical(reports_fine, "l1_time"), 0.0), 1e-9 * l1_scale);

  std::vector<CertificateReport> reports = run_certificates(fine, problem, allow);

  // Entropy inequalities, same calibration scheme.
  EntropyCheckConfig ecfg;
  ecfg.k_count = cfg.entropy_levels;
  ecfg.tiles_t = cfg.entropy_tiles;
  ecfg.tiles_x = cfg.entropy_tiles;
  {
    const auto res_fine = entropy_residuals(fine, problem, ecfg);
    const auto res_coarse = entropy_residuals(coarse, problem, ecfg);
    double min_fine = 0.0, min_coarse = 0.0, scale = 1.0;
    for (const EntropyResidual& r : res_fine) {
      min_fine = std::min(min_fine, r.value);
      scale = std::max(scale, std::abs(r.value));
    }
    for (const EntropyResidual& r : res_coarse)
      min_coarse = std::min(min_coarse, r.value);
    ecfg.tolerance = allowance_rule(-min_coarse, -min_fine, 1e-9 * scale);
    CertificateReport entropy;
    entropy.check = "entropy";
    entropy.bound = ecfg.tolerance;
    entropy.empirical = -min_fine;
    entropy.margin = entropy.bound - entropy.empirical;
    entropy.pass = entropy.empirical <= entropy.bound;
    reports.push_back(entropy);
  }

  // Randomized stability spot checks against the a-priori bounds.
  std::mt19937_64 rng(cfg.seed);
  const Interval density_range{0.0, sc.max_density};
  SolverConfig end_only;
  end_only.cfl = cfg.cfl;
  end_only.record_times = {T};
  const std::vector<double>& u_fine_T = fine.profiles.back();

  for (int check = 0; check < cfg.stability_checks; ++check) {
    {
      // Perturb all three data of the scenario, keep the flux.
      std::vector<double> breakpoints;
      const double L = sc.road_length;
      for (int i = 1; i < 4; ++i) breakpoints.push_back(L * i / 4.0);
      std::vector<double> plateau(4);
      for (double& v : plateau) v = 0.3 * sc.max_density * uniform01(rng);
      StepFunction initial_b(0.0, L, breakpoints, plateau);
      StepFunction left_b =
          perturbed_steps(problem.left_data(), rng, 0.2 * sc.max_density,
                          density_range);
      StepFunction right_b =
          perturbed_steps(problem.right_data(), rng, 0.2 * sc.max_density,
                          density_range);

      const double bound = data_stability_bound_segment(
          problem.initial(), initial_b, problem.left_data(), left_b,
          problem.right_data(), right_b, problem.speed(), problem.flux(), T);

      IBVPProblem other =
          IBVPProblem::segment(std::move(initial_b), std::move(left_b),
                               std::move(right_b), problem.speed(),
                               problem.flux());
      const SolutionField field_b = solve(other, grid_fine, end_only);
      const double empirical = l1_profile_distance(
          u_fine_T, field_b.profiles.back(), grid_fine.dx());
      reports.push_back(make_spot_report(
          "stability_data_" + std::to_string(check), bound, empirical));
    }
    {
      // Keep the data, perturb the speed profile and widen the flux.
      auto speed_steps = problem.speed().steps();
      std::vector<double> breakpoints(speed_steps.edges().begin() + 1,
                                      speed_steps.edges().end() - 1);
      std::vector<double> values(speed_steps.values().begin(),
                                 speed_steps.values().end());
      for (double& v : values) v *= 1.0 + 0.3 * (uniform01(rng) - 0.5);
      const double floor = *std::min_element(values.begin(), values.end());
      SpeedProfile speed_b(StepFunction(0.0, T, std::move(breakpoints),
                                        std::move(values)),
                           floor);
      LWRFlux flux_b(sc.max_density * (1.0 + 0.15 * uniform01(rng)));

      IBVPProblem other = IBVPProblem::segment(
          problem.initial(), problem.left_data(), problem.right_data(), speed_b,
          flux_b);
      const double bound = flux_stability_bound(problem, other, T).value;
      const SolutionField field_b = solve(other, grid_fine, end_only);
      const double empirical = l1_profile_distance(
          u_fine_T, field_b.profiles.back(), grid_fine.dx());
      reports.push_back(make_spot_report(
          "stability_flux_" + std::to_string(check), bound, empirical));
    }
  }

  CsvWriter csv(out_file(cfg, "certificates.csv"),
                {"check", "bound", "empirical", "margin", "pass"});
  std::string failing;
  for (const CertificateReport& r : reports) {
    csv.row({r.check, format_double(r.bound), format_double(r.empirical),
             format_double(r.margin), r.pass ? "1" : "0"});
    if (!r.pass) failing += (failing.empty() ? "" : ", ") + r.check;
  }
  result.artifacts.push_back("certificates.csv");

  if (!failing.empty()) {
    result.error = "certificate check failed: " + failing;
    write_error_file(cfg, result, "certificate", result.error);
    return 4;
  }
  return 0;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult result;
  try {
    fs::create_directories(cfg.out_dir);
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.error = std::string("cannot create output directory: ") + e.what();
    return result;
  }

  try {
    validate_feasibility(cfg);
  } catch (const ConfigError& e) {
    result.exit_code = 2;
    result.error = e.what();
    write_error_file(cfg, result, "config", result.error);
    return result;
  }

  try {
    write_manifest(cfg, result);
    switch (cfg.mode) {
      case RunMode::solve: run_solve(cfg, result); break;
      case RunMode::sweep: run_sweep(cfg, result); break;
      case RunMode::gamma_check: run_gamma_check(cfg, result); break;
      case RunMode::certify: result.exit_code = run_certify(cfg, result); break;
    }
  } catch (const ConfigError& e) {
    result.exit_code = 2;
    result.error = e.what();
    write_error_file(cfg, result, "config", result.error);
  } catch (const std::exception& e) {
    result.exit_code = 3;
    result.error = e.what();
    write_error_file(cfg, result, "numerical", result.error);
  }
  return result;
}

}  // namespace conslaw
