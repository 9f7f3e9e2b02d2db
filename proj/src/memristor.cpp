#include "btu/memristor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "btu/errors.hpp"

namespace btu {

GeneralFamily to_family(const MemristorParams& p) {
  GeneralFamily g;
  g.a11 = -1.0;
  g.a12 = 1.0;
  g.a21 = -p.xi;
  g.a22 = p.beta;
  g.c = 1.0;
  g.a = p.a;
  g.b = p.b;
  return g;
}

MemristorParams normalize_alpha(const CircuitParams& raw) {
  if (!(raw.alpha > 0.0)) fail(ErrorCode::NonPositiveAlpha, "alpha must be positive");
  const double r = std::sqrt(raw.alpha);
  MemristorParams p;
  p.a = r * raw.a;
  p.b = raw.alpha * raw.b;
  p.beta = raw.beta;
  p.xi = raw.alpha * raw.xi;
  p.alpha = raw.alpha;
  return p;
}

CircuitParams denormalize_alpha(const MemristorParams& p) {
  const double alpha = p.alpha.value_or(1.0);
  if (!(alpha > 0.0)) fail(ErrorCode::NonPositiveAlpha, "alpha must be positive");
  const double r = std::sqrt(alpha);
  return {p.a / r, p.b / alpha, p.beta, p.xi / alpha, alpha};
}

SpaceState normalize_state(const SpaceState& raw, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorCode::NonPositiveAlpha, "alpha must be positive");
  const double r = std::sqrt(alpha);
  return {r * raw[0], alpha * r * raw[1], r * raw[2]};
}

SpaceState denormalize_state(const SpaceState& s, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorCode::NonPositiveAlpha, "alpha must be positive");
  const double r = std::sqrt(alpha);
  return {s[0] / r, s[1] / (alpha * r), s[2] / r};
}

Field<3> general_field(const GeneralFamily& g) {
  return [g](double, const SpaceState& s) {
    return SpaceState{g.a11 * g.w(s[2]) * s[0] + g.a12 * s[1], g.a21 * s[0] + g.a22 * s[1], s[0]};
  };
}

Field<3> memristor_field(const MemristorParams& p) { return general_field(to_family(p)); }

Field<3> circuit_field(const CircuitParams& raw) {
  return [raw](double, const SpaceState& s) {
    const double w = (3.0 * s[2] + 2.0 * raw.a) * s[2] + raw.b;
    return SpaceState{raw.alpha * (s[1] - w * s[0]), -raw.xi * s[0] + raw.beta * s[1], s[0]};
  };
}

double first_integral(const GeneralFamily& g, const SpaceState& s) {
  return -g.a22 * s[0] + g.a12 * s[1] - g.a12 * g.a21 * s[2] + g.a11 * g.a22 * g.q(s[2]);
}

double first_integral(const MemristorParams& p, const SpaceState& s) {
  const double z = s[2];
  return -p.beta * s[0] + s[1] - p.beta * z * z * z - p.a * p.beta * z * z +
         (p.xi - p.b * p.beta) * z;
}

namespace {

void require_a12(const GeneralFamily& g) {
  if (g.a12 == 0.0) fail(ErrorCode::ZeroA12, "a12 must be nonzero for the reduction");
}

}  // namespace

Field<2> lienard_reduce(const GeneralFamily& g, double h) {
  require_a12(g);
  return [g, h](double, const State<2>& s) {
    return State<2>{s[1] - g.lienard_f(s[0]), -g.lienard_g(s[0]) + h};
  };
}

SpaceState lift_point(const GeneralFamily& g, double h, PlanarState l) {
  require_a12(g);
  return {l.y - g.lienard_f(l.x),
          ((g.a22 * g.a22 + g.a12 * g.a21) * l.x + g.a22 * l.y + h) / g.a12, l.x};
}

SpaceTrajectory lift(const GeneralFamily& g, double h, const Trajectory<2>& planar) {
  require_a12(g);
  SpaceTrajectory out;
  out.times = planar.times;
  out.states.reserve(planar.states.size());
  for (const auto& s : planar.states) out.states.push_back(lift_point(g, h, to_planar(s)));
  return out;
}

CanonicalForm to_canonical(const GeneralFamily& g, double h) {
  if (g.c == 0.0) fail(ErrorCode::PreconditionViolated, "cubic coefficient c must be nonzero");
  const double c = g.c, a = g.a, b = g.b;
  const double p11 = g.a11 * g.a22, p12 = g.a12 * g.a21;
  // Shifting X by a/(3c) removes the quadratic terms.
  const double l1 = g.a22 + b * g.a11 - a * a * g.a11 / (3.0 * c);
  const double l2 = p12 - b * p11 + a * a * p11 / (3.0 * c);
  const double l3 =
      h + a * b * p11 / (3.0 * c) - a * p12 / (3.0 * c) - 2.0 * a * a * a * p11 / (27.0 * c * c);
  CanonicalForm cf;
  cf.x_shift = a / (3.0 * c);
  cf.cross = 3.0 * c * g.a11;
  if (g.a22 == 0.0) {
    cf.branch = CanonicalBranch::B;
    cf.mu = {l3, l2, l1};
    cf.cubic = 0.0;
    return cf;
  }
  if (!(p11 < 0.0)) {
    fail(ErrorCode::BranchUnavailable, "canonical form needs a22 = 0 or a11 a22 < 0");
  }
  const double k = -p11;
  cf.branch = CanonicalBranch::A;
  cf.x_scale = std::sqrt(k);
  cf.time_scale = k;
  cf.mu = {l3 / (k * k * cf.x_scale), l2 / (k * k), l1 / k};
  cf.cubic = c;
  return cf;
}

MuParams to_canonical(const MemristorParams& p, double h) {
  if (!(p.beta > 0.0)) fail(ErrorCode::PreconditionViolated, "beta must be positive");
  const double a = p.a, b = p.b, beta = p.beta, xi = p.xi;
  return {(27.0 * h + 9.0 * a * xi + 2.0 * a * a * a * beta - 9.0 * a * b * beta) /
              (27.0 * std::pow(beta, 2.5)),
          (beta * (3.0 * b - a * a) - 3.0 * xi) / (3.0 * beta * beta),
          (a * a - 3.0 * b + 3.0 * beta) / (3.0 * beta)};
}

PlanarState lienard_to_canonical(const GeneralFamily& g, const CanonicalForm& cf,
                                 PlanarState l) {
  const double xdot = l.y - g.lienard_f(l.x);
  const double k32 = cf.time_scale * cf.x_scale;
  return {(l.x + cf.x_shift) / cf.x_scale, xdot / k32};
}

PlanarState canonical_to_lienard(const GeneralFamily& g, const CanonicalForm& cf,
                                 PlanarState c) {
  const double X = cf.x_scale * c.x - cf.x_shift;
  const double k32 = cf.time_scale * cf.x_scale;
  return {X, k32 * c.y + g.lienard_f(X)};
}

bool SphereBounds::all_hold() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(),
                     [](const Hypothesis& h) { return h.holds; });
}

SphereBounds sphere_report(const MemristorParams& p) {
  if (!(p.beta > 0.0 && p.xi > 0.0)) {
    fail(ErrorCode::PreconditionViolated, "beta and xi must be positive");
  }
  const double a = p.a, b = p.b, beta = p.beta, xi = p.xi;
  const double d = 3.0 * b - a * a;
  const double slope = a * a - 3.0 * b + 3.0 * beta;
  SphereBounds r;
  r.hypotheses = {
      {"a^2 - 3b < 0", -d < 0.0},
      {"a^2 - 3b + 3 beta > 0", slope > 0.0},
      {"3b - a^2 > 0", d > 0.0},
      {"3b - a^2 < 3 xi / beta", d < 3.0 * xi / beta},
      {"beta (3b - a^2) - 3 xi < (5/2)(3b - a^2 - 3 beta) beta",
       beta * d - 3.0 * xi < 2.5 * (d - 3.0 * beta) * beta},
      {"(5/2)(3b - a^2 - 3 beta) beta < 0", 2.5 * (d - 3.0 * beta) * beta < 0.0},
  };
  const double odd = 9.0 * a * xi + 2.0 * a * a * a * beta - 9.0 * a * b * beta;
  const double root = std::sqrt(std::max(slope, 0.0));
  const double even = (4.0 * a * a * beta + 3.0 * beta * beta - 12.0 * b * beta + 9.0 * xi) * root;
  r.A = even + odd;
  r.B = even - odd;
  r.h_lo = -r.A / 27.0;
  r.h_hi = r.B / 27.0;

  const MuParams mu = to_canonical(p, 0.0);
  const double m = std::sqrt(std::max(mu.mu3, 0.0) / 3.0);
  const double hopf = std::max(0.0, m * (-mu.mu2 - m * m));
  const double span = 27.0 * std::pow(beta, 2.5) * hopf;
  r.hopf_h_lo = (-span - odd) / 27.0;
  r.hopf_h_hi = (span - odd) / 27.0;
  return r;
}

SphereBounds sphere_bounds(const MemristorParams& p) {
  SphereBounds r = sphere_report(p);
  if (!r.all_hold()) {
    std::string failed;
    for (const auto& h : r.hypotheses) {
      if (h.holds) continue;
      if (!failed.empty()) failed += "; ";
      failed += h.name;
    }
    fail(ErrorCode::HypothesesViolated, failed);
  }
  return r;
}

namespace {

SpaceTrajectory cycle_on_leaf(const MemristorParams& p, double h, const IntegratorConfig& cfg) {
  const GeneralFamily g = to_family(p);
  const CanonicalForm cf = to_canonical(g, h);
  const auto cycle = find_limit_cycle(cf.mu, {}, cfg);
  if (!cycle) fail(ErrorCode::CycleNotFound, "no stable cycle on leaf h = " + std::to_string(h));
  Trajectory<2> planar;
  planar.times.reserve(cycle->size());
  planar.states.reserve(cycle->size());
  for (std::size_t i = 0; i < cycle->size(); ++i) {
    planar.times.push_back(cycle->times[i] / cf.time_scale);
    planar.states.push_back(
        to_array(canonical_to_lienard(g, cf, to_planar(cycle->states[i]))));
  }
  return lift(g, h, planar);
}

double z_half_width(const SpaceTrajectory& t) {
  double lo = t.states.front()[2], hi = lo;
  for (const auto& s : t.states) {
    lo = std::min(lo, s[2]);
    hi = std::max(hi, s[2]);
  }
  return 0.5 * (hi - lo);
}

}  // namespace

SpaceTrajectory leaf_cycle(const MemristorParams& p, double h, const IntegratorConfig& cfg) {
  const SphereBounds r = sphere_bounds(p);
  if (!(h > r.h_lo && h < r.h_hi)) {
    fail(ErrorCode::PreconditionViolated, "h lies outside (-A/27, B/27)");
  }
  return cycle_on_leaf(p, h, cfg);
}

SphereSlices sphere_slices(const MemristorParams& p, std::size_t n_slices,
                           const IntegratorConfig& cfg) {
  if (n_slices == 0) fail(ErrorCode::PreconditionViolated, "need at least one slice");
  const SphereBounds r = sphere_bounds(p);
  SphereSlices out;
  out.params = p;
  const double mid = 0.5 * (r.hopf_h_lo + r.hopf_h_hi);
  const double half = 0.5 * (r.hopf_h_hi - r.hopf_h_lo);
  std::vector<double> hs;
  for (std::size_t k = 0; k < n_slices; ++k) {
    const double angle = (2.0 * static_cast<double>(k) + 1.0) * std::numbers::pi /
                         (2.0 * static_cast<double>(n_slices));
    hs.push_back(mid - half * std::cos(angle));
  }
  for (double h : hs) {
    try {
      SpaceTrajectory orbit = cycle_on_leaf(p, h, cfg);
      const double width = z_half_width(orbit);
      if (width < 1e-4) {
        out.skipped.push_back({h, "cycle narrower than 1e-4"});
        continue;
      }
      out.h_values.push_back(h);
      out.amplitudes.push_back(width);
      out.orbits.push_back(std::move(orbit));
    } catch (const Error& e) {
      out.skipped.push_back({h, e.what()});
    }
  }
  return out;
}

}  // namespace btu
