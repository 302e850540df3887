#include "conslaw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conslaw {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

Interval span_with_ghosts(std::span<const double> u, double a, double b) {
  auto [mn, mx] = std::minmax_element(u.begin(), u.end());
  return {std::min({*mn, a, b}), std::max({*mx, a, b})};
}

}  // namespace

GridSpec GridSpec::covering(Interval domain, int n_cells) {
  if (n_cells < 4) throw std::invalid_argument("GridSpec: need at least 4 cells");
  if (!(domain.lo < domain.hi))
    throw std::invalid_argument("GridSpec: empty domain");
  return {n_cells, domain.lo, domain.hi};
}

double SolutionField::mass_at(std::size_t i) const {
  double m = 0.0;
  for (double u : profiles.at(i)) m += u;
  return m * dx();
}

double SolutionField::influx_total() const {
  double s = 0.0;
  for (const auto& r : steps) s += r.influx * r.dt;
  return s;
}

double SolutionField::outflux_total() const {
  double s = 0.0;
  for (const auto& r : steps) s += r.outflux * r.dt;
  return s;
}

double lax_friedrichs_flux(double u_left, double u_right, double v_t,
                           const FluxModel& g, double dt, double dx) {
  return 0.5 * v_t * (g(u_left) + g(u_right)) -
         0.5 * (dx / dt) * (u_right - u_left);
}

double godunov_flux(double u_left, double u_right, double v_t, const FluxModel& g) {
  if (u_left <= u_right) return v_t * g.min_on({u_left, u_right});
  return v_t * g.max_on({u_right, u_left});
}

double bln_boundary_flux(Side side, double interior_trace, double boundary_datum,
                         double v_t, const FluxModel& g) {
  return side == Side::left ? godunov_flux(boundary_datum, interior_trace, v_t, g)
                            : godunov_flux(interior_trace, boundary_datum, v_t, g);
}

void conservative_step(std::span<const double> u, std::span<double> out,
                       double v_t, const FluxModel& g, double dt, double dx,
                       double left_flux, double right_flux) {
  require(u.size() == out.size() && u.size() >= 2, "conservative_step: bad sizes");
  require(dt > 0.0 && dx > 0.0, "conservative_step: dt and dx must be positive");
  const double lambda = dt / dx;
  const double visc = 0.5 * dx / dt;
  const std::size_t n = u.size();

  double f_prev = left_flux;
  double gv_cur = v_t * g(u[0]);
  for (std::size_t j = 0; j < n; ++j) {
    double f_next;
    if (j + 1 < n) {
      const double gv_next = v_t * g(u[j + 1]);
      f_next = 0.5 * (gv_cur + gv_next) - visc * (u[j + 1] - u[j]);
      gv_cur = gv_next;
    } else {
      f_next = right_flux;
    }
    out[j] = u[j] - lambda * (f_next - f_prev);
    f_prev = f_next;
  }
}

std::vector<double> lax_friedrichs_step(std::span<const double> u, double v_t,
                                        const FluxModel& g, double dt, double dx,
                                        double left_ghost, double right_ghost) {
  require(u.size() >= 2, "lax_friedrichs_step: need at least 2 cells");
  require(dt > 0.0 && dx > 0.0, "lax_friedrichs_step: dt and dx must be positive");
  const Interval range = span_with_ghosts(u, left_ghost, right_ghost);
  const double courant = dt / dx * v_t * g.derivative_sup(range);
  if (courant > 1.0 + 1e-9)
    throw CflError("lax_friedrichs_step: CFL number " + std::to_string(courant) +
                   " exceeds 1; shrink dt");
  std::vector<double> out(u.size());
  const double f_left = lax_friedrichs_flux(left_ghost, u[0], v_t, g, dt, dx);
  const double f_right =
      lax_friedrichs_flux(u[u.size() - 1], right_ghost, v_t, g, dt, dx);
  conservative_step(u, out, v_t, g, dt, dx, f_left, f_right);
  return out;
}

namespace {

struct EventTable {
  std::vector<double> times;       // strictly increasing, last one == T
  std::vector<bool> is_record;     // parallel to times
};

EventTable build_events(const IBVPProblem& p, const SolverConfig& cfg) {
  const double T = p.horizon();
  std::vector<double> raw;
  auto add_interior = [&raw, T](const StepFunction& f) {
    const auto e = f.edges();
    for (std::size_t i = 1; i + 1 < e.size(); ++i)
      if (e[i] > 0.0 && e[i] < T) raw.push_back(e[i]);
  };
  add_interior(p.speed().steps());
  add_interior(p.left_data());
  if (p.kind() == DomainKind::segment) add_interior(p.right_data());
  for (double r : cfg.record_times)
    if (r > 0.0 && r < T) raw.push_back(r);
  raw.push_back(T);
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());

  EventTable ev;
  ev.times = std::move(raw);
  ev.is_record.assign(ev.times.size(), false);
  for (double r : cfg.record_times) {
    auto it = std::lower_bound(ev.times.begin(), ev.times.end(), r);
    if (it != ev.times.end() && *it == r)
      ev.is_record[static_cast<std::size_t>(it - ev.times.begin())] = true;
  }
  return ev;
}

void validate_record_times(const SolverConfig& cfg, double T) {
  double prev = -1.0;
  for (double r : cfg.record_times) {
    require(std::isfinite(r) && r >= 0.0 && r <= T,
            "SolverConfig: record times must lie in [0, T]");
    require(r > prev, "SolverConfig: record times must be sorted and unique");
    prev = r;
  }
}

std::vector<double> initial_cell_averages(const StepFunction& u0,
                                          const GridSpec& grid) {
  std::vector<double> u(static_cast<std::size_t>(grid.n_cells));
  const double dx = grid.dx();
  for (int j = 0; j < grid.n_cells; ++j) {
    const double a = grid.x_lo + j * dx;
    const double b = (j + 1 == grid.n_cells) ? grid.x_hi : grid.x_lo + (j + 1) * dx;
    u[static_cast<std::size_t>(j)] = u0.integrate(a, b) / (b - a);
  }
  return u;
}

}  // namespace

SolutionField solve(const IBVPProblem& p, const GridSpec& grid,
                    const SolverConfig& cfg) {
  require(grid.n_cells >= 4, "solve: need at least 4 cells");
  require(grid.x_lo == p.space_domain().lo && grid.x_hi == p.space_domain().hi,
          "solve: grid must cover exactly the problem's space domain");
  require(cfg.cfl > 0.0 && cfg.cfl <= 1.0, "solve: cfl must lie in (0, 1]");
  const double T = p.horizon();
  validate_record_times(cfg, T);

  const double dx = grid.dx();
  if (p.kind() == DomainKind::half_line) {
    const double margin =
        grid.x_hi - (p.initial().support_hi() + p.max_wave_speed() * T);
    require(margin >= dx - 1e-12 * grid.x_hi,
            "solve: truncation margin below one cell; enlarge x_max or refine");
  }

  const Interval hull = p.hull(T);
  const double dg_sup = p.flux().derivative_sup(hull);
  const FluxModel& g = p.flux();
  const bool segment = p.kind() == DomainKind::segment;

  SolutionField field;
  field.grid = grid;
  std::vector<double> u = initial_cell_averages(p.initial(), grid);
  std::vector<double> next(u.size());

  const EventTable ev = build_events(p, cfg);
  field.steps.reserve(1024);

  if (!cfg.record_times.empty() && cfg.record_times.front() == 0.0) {
    field.times.push_back(0.0);
    field.profiles.push_back(u);
  }

  double t = 0.0;
  for (std::size_t ie = 0; ie < ev.times.size(); ++ie) {
    const double target = ev.times[ie];
    while (t < target) {
      const double v_t = p.speed()(t);
      const double speed = v_t * dg_sup;
      const double dt_cfl =
          speed > 0.0 ? cfg.cfl * dx / speed : std::numeric_limits<double>::infinity();
      double t_new, dt;
      if (t + dt_cfl >= target) {
        t_new = target;
        dt = target - t;
      } else {
        t_new = t + dt_cfl;
        dt = dt_cfl;
      }

      const double b_left = p.left_data()(t);
      const double f_left = bln_boundary_flux(Side::left, u.front(), b_left, v_t, g);
      const double f_right =
          segment ? bln_boundary_flux(Side::right, u.back(), p.right_data()(t), v_t, g)
                  : v_t * g(u.back());

      conservative_step(u, next, v_t, g, dt, dx, f_left, f_right);
      u.swap(next);
      field.steps.push_back({t, dt, f_left, f_right});
      t = t_new;
    }
    if (!std::all_of(u.begin(), u.end(), [](double x) { return std::isfinite(x); }))
      throw NumericError("solve: non-finite state at t = " + std::to_string(t));
    if (ev.is_record[ie]) {
      field.times.push_back(t);
      field.profiles.push_back(u);
    }
  }
  return field;
}

SolutionField solve_via_time_rescaling(const IBVPProblem& p, const GridSpec& grid,
                                       const SolverConfig& cfg) {
  const SpeedProfile& v = p.speed();
  const double t_hat = v.rescaled_horizon();
  validate_record_times(cfg, p.horizon());

  auto rescale_steps = [&v, t_hat](const StepFunction& f) {
    const auto e = f.edges();
    std::vector<double> bps;
    bps.reserve(e.size() - 2);
    for (std::size_t i = 1; i + 1 < e.size(); ++i)
      bps.push_back(v.to_rescaled_time(e[i]));
    return StepFunction(0.0, t_hat, std::move(bps),
                        {f.values().begin(), f.values().end()});
  };

  SpeedProfile unit = SpeedProfile::constant(1.0, t_hat);
  IBVPProblem q =
      p.kind() == DomainKind::segment
          ? IBVPProblem::segment(p.initial(), rescale_steps(p.left_data()),
                                 rescale_steps(p.right_data()), unit, p.flux())
          : IBVPProblem::half_line(p.initial(), rescale_steps(p.left_data()), unit,
                                   p.flux(), p.space_domain().hi);

  SolverConfig qcfg = cfg;
  qcfg.record_times.clear();
  for (double r : cfg.record_times)
    qcfg.record_times.push_back(v.to_rescaled_time(r));

  SolutionField f = solve(q, grid, qcfg);

  // Map the rescaled axis back: record labels return to the requested times,
  // step diagnostics are expressed in original time. Scaling the rates by
  // d tau / dt keeps the per-step mass transfer exactly what the rescaled
  // march moved, even when a step spans a speed breakpoint.
  f.times.assign(cfg.record_times.begin(), cfg.record_times.end());
  for (auto& s : f.steps) {
    const double tau0 = s.t;
    const double dtau = s.dt;
    const double t0 = v.from_rescaled_time(tau0);
    const double t1 = v.from_rescaled_time(std::min(tau0 + dtau, t_hat));
    const double dt = t1 - t0;
    const double rate = dt > 0.0 ? dtau / dt : 0.0;
    s.t = t0;
    s.dt = dt;
    s.influx *= rate;
    s.outflux *= rate;
  }
  return f;
}

double l1_profile_distance(std::span<const double> a, std::span<const double> b,
                           double dx) {
  require(a.size() == b.size(), "l1_profile_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * dx;
}

double profile_total_variation(std::span<const double> u) {
  double tv = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) tv += std::abs(u[i] - u[i - 1]);
  return tv;
}

}  // namespace conslaw
