#include "btu/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "btu/errors.hpp"
#include "btu/melnikov.hpp"

namespace btu {

Field<2> unfolding_ode(const MuParams& mu) {
  return [mu](double, const State<2>& s) { return to_array(unfolding_field(mu, to_planar(s))); };
}

PlanarTrajectory integrate_unfolding(const MuParams& mu, PlanarState start, double t_end,
                                     const IntegratorConfig& cfg) {
  return integrate<2>(unfolding_ode(mu), 0.0, to_array(start), t_end, cfg).trajectory;
}

PlanarState manifold_direction(const MuParams& mu, const Equilibrium& saddle,
                               ManifoldBranch branch) {
  (void)mu;
  const double disc = std::sqrt(saddle.trace * saddle.trace - 4.0 * saddle.det);
  const bool unstable =
      branch == ManifoldBranch::UnstablePlus || branch == ManifoldBranch::UnstableMinus;
  const double lambda = 0.5 * (saddle.trace + (unstable ? disc : -disc));
  const double norm = std::hypot(1.0, lambda);
  const double sign =
      (branch == ManifoldBranch::UnstablePlus || branch == ManifoldBranch::StablePlus) ? 1.0 : -1.0;
  return {sign / norm, sign * lambda / norm};
}

namespace {

double default_escape(const MuParams& mu) {
  double r = 1.0;
  for (const auto& e : solve_equilibria(mu)) r = std::max(r, std::abs(e.x));
  return 20.0 * r;
}

PlanarState shoot_once(const MuParams& mu, const Equilibrium& saddle, ManifoldBranch branch,
                       double delta, double section_x, IntegratorConfig cfg, int direction,
                       double* time) {
  const PlanarState v = manifold_direction(mu, saddle, branch);
  const State<2> start{saddle.x + delta * v.x, delta * v.y};
  const bool stable = branch == ManifoldBranch::StablePlus || branch == ManifoldBranch::StableMinus;
  Field<2> f = unfolding_ode(mu);
  if (stable) f = reversed<2>(f);
  cfg.record = false;
  if (!std::isfinite(cfg.escape_radius)) cfg.escape_radius = default_escape(mu);
  const EventSpec<2> event{[section_x](double, const State<2>& s) { return s[0] - section_x; },
                           direction, true, {}};
  auto res = integrate<2>(f, 0.0, start, cfg.max_time, cfg, std::span(&event, 1));
  if (res.status != IntegrationStatus::Event) {
    fail(ErrorCode::NoCrossing, "separatrix did not reach x = " + std::to_string(section_x));
  }
  if (time) *time = res.final_time;
  return to_planar(res.final_state);
}

}  // namespace

ManifoldShot saddle_manifold_shot(const MuParams& mu, const Equilibrium& saddle,
                                  ManifoldBranch branch, double delta, double section_x,
                                  const IntegratorConfig& cfg, int crossing_direction,
                                  bool richardson) {
  if (saddle.kind != EquilibriumKind::Saddle) {
    fail(ErrorCode::PreconditionViolated, "manifold shooting needs a saddle");
  }
  if (!(delta >= 1e-8 && delta <= 1e-4)) {
    fail(ErrorCode::PreconditionViolated, "delta must lie in [1e-8, 1e-4]");
  }
  ManifoldShot shot;
  shot.crossing =
      shoot_once(mu, saddle, branch, delta, section_x, cfg, crossing_direction, &shot.time);
  if (richardson) {
    const PlanarState half =
        shoot_once(mu, saddle, branch, 0.5 * delta, section_x, cfg, crossing_direction, nullptr);
    shot.richardson_shift = std::abs(half.y - shot.crossing.y);
  }
  return shot;
}

SplittingResult homoclinic_splitting(const MuParams& mu, const IntegratorConfig& cfg,
                                     double delta) {
  if (mu.mu1 < 0.0) {
    auto r = homoclinic_splitting({-mu.mu1, mu.mu2, mu.mu3}, cfg, delta);
    r.mu = mu;
    r.section_x = -r.section_x;
    return r;
  }
  if (!(discriminant(mu) < 0.0)) {
    fail(ErrorCode::NoThreeEquilibria, "homoclinic splitting needs three equilibria");
  }
  const auto eqs = solve_equilibria(mu);
  if (eqs.size() != 3) fail(ErrorCode::NoThreeEquilibria, "homoclinic splitting needs three equilibria");
  const Equilibrium& saddle = eqs[2];
  const double section = eqs[1].x;
  // Loop interior lies to the left of s_R: both separatrices start with x decreasing.
  const auto u = saddle_manifold_shot(mu, saddle, ManifoldBranch::UnstableMinus, delta, section,
                                      cfg, +1);
  const auto s = saddle_manifold_shot(mu, saddle, ManifoldBranch::StableMinus, delta, section,
                                      cfg, -1);
  return {mu, u.crossing.y - s.crossing.y, section};
}

namespace {

struct AbsTol {
  double tol;
  bool operator()(double a, double b) const { return std::abs(a - b) <= tol; }
};

struct Root {
  double s = 0.0;
  double gap = 0.0;
};

// Bracket a sign change of g by stepping outward from s0 on both sides, then
// refine with TOMS 748. Evaluations that throw (no three equilibria, no
// crossing) shrink the step on that side instead of ending the search, since
// near the fold curve the root can sit just inside the admissible region.
std::optional<Root> bracket_and_solve(const std::function<double(double)>& g, double s0,
                                      double step, double x_tol, std::string* why) {
  auto eval = [&](double s) -> std::optional<double> {
    try {
      return g(s);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  const auto g0 = eval(s0);
  if (!g0) {
    if (why) *why = "gap undefined at the seed";
    return std::nullopt;
  }
  if (*g0 == 0.0) return Root{s0, 0.0};
  struct Side {
    double dir, last, g_last, h;
    int shrinks = 0;
    bool open = true;
  };
  Side sides[2] = {{+1.0, s0, *g0, step}, {-1.0, s0, *g0, step}};
  bool found = false;
  double a = 0, ga = 0, b = 0, gb = 0;
  for (int k = 0; k < 80 && !found && (sides[0].open || sides[1].open); ++k) {
    for (Side& sd : sides) {
      if (!sd.open) continue;
      const double trial = sd.last + sd.dir * sd.h;
      const auto gt = eval(trial);
      if (!gt) {
        sd.h *= 0.25;
        if (++sd.shrinks > 12) sd.open = false;
        continue;
      }
      if ((*gt > 0.0) != (sd.g_last > 0.0)) {
        a = std::min(trial, sd.last);
        b = std::max(trial, sd.last);
        ga = a == trial ? *gt : sd.g_last;
        gb = a == trial ? sd.g_last : *gt;
        found = true;
        break;
      }
      sd.last = trial;
      sd.g_last = *gt;
      sd.h *= 1.6;
    }
  }
  if (!found) {
    if (why) *why = "no sign change of the splitting gap";
    return std::nullopt;
  }
  std::uintmax_t iters = 100;
  try {
    auto r = boost::math::tools::toms748_solve(g, a, b, ga, gb, AbsTol{x_tol}, iters);
    const double s = std::abs(g(r.first)) < std::abs(g(r.second)) ? r.first : r.second;
    return Root{s, g(s)};
  } catch (const Error& e) {
    if (why) *why = e.what();
    return std::nullopt;
  }
}

}  // namespace

Curve ContinuationResult::numeric_curve() const {
  Curve c;
  c.label = "hom_numeric";
  c.mu3 = mu3;
  for (const auto& p : points) {
    if (!p.numeric) continue;
    c.samples.push_back(*p.numeric);
    c.param.push_back(p.theta);
  }
  return c;
}

Curve ContinuationResult::analytic_curve() const {
  Curve c;
  c.label = "hom_analytic";
  c.mu3 = mu3;
  for (const auto& p : points) {
    c.samples.push_back(p.analytic);
    c.param.push_back(p.theta);
  }
  return c;
}

Curve homoclinic_continuation(double mu3, const std::vector<double>& mu2_samples,
                              const IntegratorConfig& cfg) {
  if (!(mu3 > 0.0)) fail(ErrorCode::PreconditionViolated, "homoclinic window is empty for mu3 <= 0");
  Curve out;
  out.label = "hom_numeric";
  out.mu3 = mu3;
  const double scale = mu3 * std::sqrt(mu3);
  double offset = 0.0;
  for (double mu2 : mu2_samples) {
    const auto theta = hom_theta_for_nu2(-mu2 / mu3, true);
    if (!theta) {
      fail(ErrorCode::RootNotBracketed, "mu2 = " + std::to_string(mu2) + " is outside the window");
    }
    const double seed = scale * nu1_of_theta(*theta);
    auto g = [&](double mu1) { return homoclinic_splitting({mu1, mu2, mu3}, cfg).gap; };
    std::string why;
    const auto root = bracket_and_solve(g, seed + offset, 1e-3 * seed, 1e-15 * seed, &why);
    if (!root) fail(ErrorCode::RootNotBracketed, why + " at mu2 = " + std::to_string(mu2));
    offset = root->s - seed;
    out.samples.push_back({mu2, root->s});
  }
  return out;
}

ContinuationResult homoclinic_continuation_theta(double mu3, const std::vector<double>& thetas,
                                                 const IntegratorConfig& cfg) {
  if (!(mu3 > 0.0)) fail(ErrorCode::PreconditionViolated, "homoclinic window is empty for mu3 <= 0");
  ContinuationResult out;
  out.mu3 = mu3;
  const double scale = mu3 * std::sqrt(mu3);
  double offset = 0.0;
  for (double theta : thetas) {
    ContinuationPoint pt;
    pt.theta = theta;
    const auto p = hom_param(theta);
    pt.analytic = {-mu3 * p.nu2, scale * p.nu1};
    const double dt = 1e-6 * std::max(theta, 1e-3);
    const auto pa = hom_param(theta - dt), pb = hom_param(theta + dt);
    const double t2 = pb.nu2 - pa.nu2, t1 = pb.nu1 - pa.nu1;
    const double tn = std::hypot(t2, t1);
    const double n2 = -t1 / tn, n1 = t2 / tn;
    auto at = [&](double s) {
      return MuParams{scale * (p.nu1 + s * n1), -mu3 * (p.nu2 + s * n2), mu3};
    };
    auto g = [&](double s) { return homoclinic_splitting(at(s), cfg).gap; };
    const auto root = bracket_and_solve(g, offset, 1e-3 * p.nu1, 1e-15 * p.nu1, &pt.failure);
    if (root) {
      offset = root->s;
      const auto m = at(root->s);
      pt.numeric = CurvePoint{m.mu2, m.mu1};
      pt.gap = root->gap;
    }
    out.points.push_back(pt);
  }
  return out;
}

std::optional<double> cycle_return_map(const MuParams& mu, double x0, const IntegratorConfig& cfg) {
  const auto eqs = solve_equilibria(mu);
  if (eqs.size() != 3) return std::nullopt;
  const double xc = eqs[1].x;
  IntegratorConfig c = cfg;
  c.record = false;
  if (!std::isfinite(c.escape_radius)) c.escape_radius = default_escape(mu);
  const EventSpec<2> event{[](double, const State<2>& s) { return s[1]; }, -1, true,
                           [xc](double, const State<2>& s) { return s[0] > xc; }};
  try {
    auto res = integrate<2>(unfolding_ode(mu), 0.0, State<2>{x0, 0.0}, c.max_time, c,
                            std::span(&event, 1));
    if (res.status != IntegrationStatus::Event) return std::nullopt;
    return res.final_state[0];
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<PlanarTrajectory> find_limit_cycle(const MuParams& mu, PlanarState seed,
                                                 const IntegratorConfig& cfg) {
  if (bendixson_excludes_cycles(mu)) return std::nullopt;
  const auto eqs = solve_equilibria(mu);
  // A lone equilibrium of this family is a saddle (or degenerate), so cycles
  // need the three-equilibrium configuration.
  if (eqs.size() != 3) return std::nullopt;
  const double xc = eqs[1].x, xr = eqs[2].x;
  const double width = xr - xc;
  const double collapse = 1e-6 * width;
  constexpr double kClosure = 1e-9;

  auto inside = [&](double x) { return x > xc && x < xr; };
  // Plain iteration of the return map, accelerated by a secant on
  // D(x) = P(x) - x whenever the secant point stays on the section.
  // A secant point can land outside the loop that holds the cycle, where the
  // map is undefined; the run then falls back to the last plain iterate.
  auto attempt = [&](double x) -> std::optional<double> {
    constexpr double kNone = std::numeric_limits<double>::quiet_NaN();
    double xp = kNone, dp = kNone, plain = kNone;
    for (int it = 0; it < 400; ++it) {
      const auto p = cycle_return_map(mu, x, cfg);
      if ((!p || !inside(*p)) && !std::isnan(plain)) {
        x = plain;
        plain = xp = dp = kNone;
        continue;
      }
      if (!p || !inside(*p) || *p - xc < collapse) return std::nullopt;
      const double d = *p - x;
      if (std::abs(d) <= 0.1 * kClosure) {
        if (x - xc < collapse) return std::nullopt;
        return x;
      }
      double next = *p;
      plain = kNone;
      if (!std::isnan(dp) && dp != d) {
        const double sec = x - d * (x - xp) / (d - dp);
        if (inside(sec) && std::abs(sec - x) < 0.5 * width) {
          next = sec;
          plain = *p;
        }
      }
      xp = x;
      dp = d;
      x = next;
    }
    return std::nullopt;
  };

  std::vector<double> starts;
  if (inside(seed.x)) starts.push_back(seed.x);
  for (double frac : {0.5, 0.25, 0.75, 0.1, 0.9, 0.05, 0.02}) starts.push_back(xc + frac * width);
  for (double x0 : starts) {
    const auto fixed = attempt(x0);
    if (!fixed) continue;
    const auto check = cycle_return_map(mu, *fixed, cfg);
    if (!check || std::abs(*check - *fixed) > kClosure) continue;
    IntegratorConfig c = cfg;
    c.record = true;
    if (!std::isfinite(c.escape_radius)) c.escape_radius = default_escape(mu);
    const EventSpec<2> event{[](double, const State<2>& s) { return s[1]; }, -1, true,
                             [xc](double, const State<2>& s) { return s[0] > xc; }};
    auto res = integrate<2>(unfolding_ode(mu), 0.0, State<2>{*fixed, 0.0}, c.max_time, c,
                            std::span(&event, 1));
    if (res.status != IntegrationStatus::Event) continue;
    return res.trajectory;
  }
  return std::nullopt;
}

}  // namespace btu
