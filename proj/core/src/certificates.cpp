#include "conslaw/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conslaw {

namespace {

// Essential range of a time datum over [0, t]: pieces starting before t.
// For t <= 0 only the right trace at 0 counts.
Interval range_on(const StepFunction& f, double t) {
  auto edges = f.edges();
  auto values = f.values();
  Interval r{values[0], values[0]};
  for (std::size_t p = 1; p < values.size(); ++p) {
    if (!(edges[p] < t)) break;
    r = Interval::join(r, {values[p], values[p]});
  }
  return r;
}

double min_on(const SpeedProfile& v, double t) {
  auto edges = v.steps().edges();
  auto values = v.steps().values();
  double m = values[0];
  for (std::size_t p = 1; p < values.size(); ++p) {
    if (!(edges[p] < t)) break;
    m = std::min(m, values[p]);
  }
  return m;
}

double sampled_derivative_gap(const FluxModel& a, const FluxModel& b, Interval u) {
  // Dense sampling with the endpoints included; exact whenever a' - b' is
  // monotone on u (true for any pair of quadratic g).
  const int n = 2048;
  double gap = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = u.lo + u.width() * i / n;
    gap = std::max(gap, std::abs(a.derivative(x) - b.derivative(x)));
  }
  return gap;
}

CertificateReport make_report(std::string check, double bound, double empirical) {
  CertificateReport r;
  r.check = std::move(check);
  r.bound = bound;
  r.empirical = empirical;
  r.margin = bound - empirical;
  r.pass = empirical <= bound;
  return r;
}

}  // namespace

StabilityBound flux_stability_bound(const IBVPProblem& p, const IBVPProblem& q,
                                    double t) {
  if (!(t >= 0.0) || t > p.horizon() + 1e-12 * (1.0 + p.horizon()) ||
      t > q.horizon() + 1e-12 * (1.0 + q.horizon()))
    throw std::invalid_argument("flux_stability_bound: t outside both horizons");

  StabilityBound b;
  b.t = t;
  const Interval hull = Interval::join(p.hull(t), q.hull(t));

  b.constants.V = std::min(p.speed().sup_on(t), q.speed().sup_on(t));
  b.constants.G = std::min(p.flux().derivative_sup(hull),
                           q.flux().derivative_sup(hull));
  b.constants.floor = std::min(min_on(p.speed(), t), min_on(q.speed(), t));
  b.constants.A = std::max(1.0, b.constants.G) * b.constants.V;
  b.constants.B = (1.0 + b.constants.V / b.constants.floor) * b.constants.G;

  b.tv = p.tv_functional(t);
  b.derivative_gap = sampled_derivative_gap(p.flux(), q.flux(), hull);
  b.speed_gap = p.speed().l1_distance(q.speed(), t);
  b.value = b.tv * (b.constants.A * t * b.derivative_gap +
                    b.constants.B * b.speed_gap);
  return b;
}

namespace {

double boundary_data_term(std::initializer_list<const StepFunction*> all_data,
                          std::initializer_list<std::pair<const StepFunction*,
                                                          const StepFunction*>>
                              pairs,
                          const SpeedProfile& v, const FluxModel& g, double t) {
  double hi = std::min(t, (*all_data.begin())->domain_hi());
  Interval hull{std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity()};
  for (const StepFunction* f : all_data) hull = Interval::join(hull, range_on(*f, t));
  const double lip = v.sup_on(t) * g.derivative_sup(hull);
  double term = 0.0;
  for (auto [a, b] : pairs)
    term += lip * a->restricted(0.0, hi).l1_distance(b->restricted(0.0, hi));
  return term;
}

}  // namespace

double data_stability_bound(const StepFunction& initial_a,
                            const StepFunction& initial_b,
                            const StepFunction& left_a, const StepFunction& left_b,
                            const SpeedProfile& v, const FluxModel& g, double t) {
  const double d0 = initial_a.l1_distance(initial_b);
  if (!(t > 0.0)) return d0;
  return d0 + boundary_data_term({&left_a, &left_b}, {{&left_a, &left_b}}, v, g, t);
}

double data_stability_bound_segment(
    const StepFunction& initial_a, const StepFunction& initial_b,
    const StepFunction& left_a, const StepFunction& left_b,
    const StepFunction& right_a, const StepFunction& right_b,
    const SpeedProfile& v, const FluxModel& g, double t) {
  const double d0 = initial_a.l1_distance(initial_b);
  if (!(t > 0.0)) return d0;
  return d0 + boundary_data_term({&left_a, &left_b, &right_a, &right_b},
                                 {{&left_a, &left_b}, {&right_a, &right_b}},
                                 v, g, t);
}

std::vector<CertificateReport> run_certificates(const SolutionField& field,
                                                const IBVPProblem& problem,
                                                const CertificateAllowances& allow) {
  if (field.times.empty() || field.profiles.size() != field.times.size())
    throw std::invalid_argument("run_certificates: malformed field");

  std::vector<CertificateReport> out;
  const double lowest = std::numeric_limits<double>::lowest();

  // Range: every recorded value inside the data hull of its own window,
  // normalized so the allowance reads as a relative excess.
  {
    double worst = lowest;
    for (std::size_t i = 0; i < field.times.size(); ++i) {
      const Interval hull = problem.hull(field.times[i]);
      const double scale = std::max(1.0, hull.width());
      for (double u : field.profiles[i]) {
        const double excess = std::max(hull.lo - u, u - hull.hi);
        worst = std::max(worst, excess / scale);
      }
    }
    out.push_back(make_report("range", allow.hull_tolerance, worst));
  }

  // Variation: profile variation within the data variation functional.
  {
    double worst = lowest;
    for (std::size_t i = 0; i < field.times.size(); ++i)
      worst = std::max(worst, profile_total_variation(field.profiles[i]) -
                                  problem.tv_functional(field.times[i]));
    out.push_back(make_report("tv", allow.tv_excess, worst));
  }

  // L1 continuity in time between consecutive records.
  {
    double worst = field.times.size() > 1 ? lowest : 0.0;
    for (std::size_t i = 0; i + 1 < field.times.size(); ++i) {
      const double dt = field.times[i + 1] - field.times[i];
      const double d = l1_profile_distance(field.profiles[i], field.profiles[i + 1],
                                           field.dx());
      const double lip =
          problem.tv_functional(field.times[i + 1]) * problem.max_wave_speed();
      worst = std::max(worst, d - lip * dt);
    }
    out.push_back(make_report("l1_time", allow.l1_time_excess, worst));
  }

  // Mass: change between the first and last record equals the net boundary
  // transfer over the steps in between.
  {
    const double t0 = field.times.front();
    const double t1 = field.times.back();
    const double slack = 1e-12 * (1.0 + problem.horizon());
    double in_sum = 0.0;
    double out_sum = 0.0;
    for (const StepRecord& r : field.steps) {
      if (r.t >= t0 - slack && r.t + r.dt <= t1 + slack) {
        in_sum += r.influx * r.dt;
        out_sum += r.outflux * r.dt;
      }
    }
    const double change = field.mass_at(field.times.size() - 1) - field.mass_at(0);
    const double defect = std::abs(change - (in_sum - out_sum));
    const double scale =
        std::max(1.0, std::abs(field.mass_at(0)) + std::abs(in_sum) +
                          std::abs(out_sum));
    out.push_back(make_report("mass", allow.mass_tolerance, defect / scale));
  }

  return out;
}

namespace {

// Polynomial bump 16 z^2 (1-z)^2 rescaled onto [lo, lo + w]: C^1, unit peak,
// integrable in closed form so the x and data quadratures are exact.
struct Bump {
  double lo = 0.0;
  double w = 1.0;

  double value(double x) const {
    const double z = (x - lo) / w;
    if (z <= 0.0 || z >= 1.0) return 0.0;
    const double s = z * (1.0 - z);
    return 16.0 * s * s;
  }
  double slope(double x) const {
    const double z = (x - lo) / w;
    if (z <= 0.0 || z >= 1.0) return 0.0;
    return 32.0 * z * (1.0 - z) * (1.0 - 2.0 * z) / w;
  }
  static double primitive(double z) {
    if (z <= 0.0) return 0.0;
    if (z >= 1.0) return 8.0 / 15.0;
    const double z3 = z * z * z;
    return 16.0 * (z3 / 3.0 - z3 * z / 2.0 + z3 * z * z / 5.0);
  }
  double integral(double a, double b) const {
    return w * (primitive((b - lo) / w) - primitive((a - lo) / w));
  }
};

// n bumps with centers spread from lo to hi inclusive, each spanning two
// center gaps, so the edge bumps stick halfway past the domain and the
// boundary terms of the inequality are exercised.
std::vector<Bump> tiling(double lo, double hi, int n) {
  std::vector<Bump> bumps;
  if (n == 1) {
    bumps.push_back({lo, hi - lo});
    return bumps;
  }
  const double gap = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) bumps.push_back({lo + gap * (i - 1), 2.0 * gap});
  return bumps;
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

std::vector<EntropyResidual> entropy_residuals(const SolutionField& field,
                                               const IBVPProblem& problem,
                                               const EntropyCheckConfig& config) {
  const double T = problem.horizon();
  const double time_slack = 1e-9 * (1.0 + T);
  if (config.k_count < 1 || config.tiles_t < 1 || config.tiles_x < 1)
    throw std::invalid_argument("entropy_residuals: bad config");
  if (field.times.empty() || field.profiles.size() != field.times.size())
    throw std::invalid_argument("entropy_residuals: malformed field");
  if (std::abs(field.times.front()) > time_slack ||
      std::abs(field.times.back() - T) > time_slack)
    throw std::invalid_argument(
        "entropy_residuals: field must record t = 0 and t = T");

  const std::size_t m = field.times.size();
  const std::size_t n = static_cast<std::size_t>(field.grid.n_cells);
  for (const auto& p : field.profiles)
    if (p.size() != n)
      throw std::invalid_argument("entropy_residuals: profile size mismatch");

  const FluxModel& g = problem.flux();
  const SpeedProfile& v = problem.speed();
  const Interval hull = problem.hull(T);
  const Interval khull = hull.inflated(config.hull_inflation * hull.width());
  const double lip = v.sup() * g.derivative_sup(khull);

  std::vector<double> kvals(config.k_count);
  for (int j = 0; j < config.k_count; ++j)
    kvals[j] = config.k_count == 1
                   ? 0.5 * (khull.lo + khull.hi)
                   : khull.lo + khull.width() * j / (config.k_count - 1);

  // g along every recorded profile, reused across levels and tiles.
  std::vector<std::vector<double>> gv(m, std::vector<double>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) gv[i][j] = g(field.profiles[i][j]);

  std::vector<double> vt(m);
  for (std::size_t i = 0; i < m; ++i) vt[i] = v(field.times[i]);

  const auto bumps_t = tiling(0.0, T, config.tiles_t);
  const auto bumps_x =
      tiling(field.grid.x_lo, field.grid.x_hi, config.tiles_x);

  const StepFunction& initial = problem.initial();
  const StepFunction& left = problem.left_data();
  const StepFunction zero_datum(0.0, T, 0.0);
  const StepFunction& right = problem.kind() == DomainKind::segment
                                  ? problem.right_data()
                                  : zero_datum;

  std::vector<EntropyResidual> out;
  out.reserve(kvals.size() * 2 * bumps_t.size() * bumps_x.size());

  std::vector<double> cell_a(n);  // integral of the bump over each cell
  std::vector<double> cell_d(n);  // bump difference across each cell
  std::vector<double> sa(m), sd(m);

  for (std::size_t bx = 0; bx < bumps_x.size(); ++bx) {
    const Bump& bumpx = bumps_x[bx];
    for (std::size_t j = 0; j < n; ++j) {
      const double x0 = field.grid.x_lo + j * field.dx();
      const double x1 = field.grid.x_lo + (j + 1) * field.dx();
      cell_a[j] = bumpx.integral(x0, x1);
      cell_d[j] = bumpx.value(x1) - bumpx.value(x0);
    }
    const double phi_left = bumpx.value(field.grid.x_lo);
    const double phi_right = bumpx.value(field.grid.x_hi);

    for (double k : kvals) {
      const double gk = g(k);
      for (int sign : {+1, -1}) {
        const double s = sign;
        // Entropy density and flux factor per recorded profile, contracted
        // against the bump geometry.
        for (std::size_t i = 0; i < m; ++i) {
          double acc_a = 0.0;
          double acc_d = 0.0;
          const auto& u = field.profiles[i];
          const auto& gu = gv[i];
          for (std::size_t j = 0; j < n; ++j) {
            const double w = s * (u[j] - k);
            if (w > 0.0) {
              acc_a += w * cell_a[j];
              acc_d += s * (gu[j] - gk) * cell_d[j];
            }
          }
          sa[i] = acc_a;
          sd[i] = acc_d;
        }

        // Exact data integrals against the bump pair.
        double init_term = 0.0;
        {
          auto edges = initial.edges();
          auto values = initial.values();
          for (std::size_t p = 0; p < values.size(); ++p)
            init_term += positive_part(s * (values[p] - k)) *
                         bumpx.integral(edges[p], edges[p + 1]);
        }
        const auto data_term = [&](const StepFunction& data, const Bump& bumpt) {
          auto edges = data.edges();
          auto values = data.values();
          double term = 0.0;
          for (std::size_t p = 0; p < values.size(); ++p)
            term += positive_part(s * (values[p] - k)) *
                    bumpt.integral(edges[p], edges[p + 1]);
          return term;
        };

        for (std::size_t bt = 0; bt < bumps_t.size(); ++bt) {
          const Bump& bumpt = bumps_t[bt];
          double interior = 0.0;
          double prev = 0.0;
          for (std::size_t i = 0; i < m; ++i) {
            const double f = bumpt.slope(field.times[i]) * sa[i] +
                             vt[i] * bumpt.value(field.times[i]) * sd[i];
            if (i > 0)
              interior += 0.5 * (prev + f) * (field.times[i] - field.times[i - 1]);
            prev = f;
          }

          EntropyResidual r;
          r.k = k;
          r.tile_t = static_cast<int>(bt);
          r.tile_x = static_cast<int>(bx);
          r.sign = sign;
          r.value = interior + bumpt.value(0.0) * init_term +
                    lip * phi_left * data_term(left, bumpt) +
                    lip * phi_right * data_term(right, bumpt);
          out.push_back(r);
        }
      }
    }
  }
  return out;
}

CertificateReport check_entropy_inequality(const SolutionField& field,
                                           const IBVPProblem& problem,
                                           const EntropyCheckConfig& config) {
  const auto residuals = entropy_residuals(field, problem, config);
  double min_value = std::numeric_limits<double>::infinity();
  for (const EntropyResidual& r : residuals)
    min_value = std::min(min_value, r.value);
  CertificateReport r;
  r.check = "entropy";
  r.bound = config.tolerance;
  r.empirical = -min_value;
  r.margin = r.bound - r.empirical;
  r.pass = r.empirical <= r.bound;
  return r;
}

}  // namespace conslaw
