#include "btu/duffing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>

#include <boost/math/tools/toms748_solve.hpp>

#include "btu/errors.hpp"

namespace btu {

DuffingParams DuffingParams::cubic(double alpha, double omega, double beta_d) {
  return {alpha, {0.0, omega, 0.0, beta_d}};
}

double DuffingParams::phi_at(double x) const {
  double v = 0.0;
  for (auto it = phi.rbegin(); it != phi.rend(); ++it) v = v * x + *it;
  return v;
}

double DuffingParams::m_at(double x) const {
  double v = 0.0;
  for (std::size_t k = phi.size(); k-- > 1;) v = v * x + static_cast<double>(k) * phi[k];
  return v;
}

double DuffingParams::phi_primitive(double x) const {
  double v = 0.0;
  for (std::size_t k = phi.size(); k-- > 0;) v = v * x + phi[k] / static_cast<double>(k + 1);
  return v * x;
}

Field<3> duffing_field(const DuffingParams& p) {
  return [p](double, const State<3>& s) -> State<3> {
    return {s[1], s[2], -p.alpha * s[2] - p.m_at(s[0]) * s[1]};
  };
}

double duffing_invariant(const DuffingParams& p, const State<3>& s) {
  return p.phi_at(s[0]) + p.alpha * s[1] + s[2];
}

Field<2> duffing_reduce(const DuffingParams& p, double h) {
  return [p, h](double, const State<2>& s) -> State<2> {
    return {s[1], -p.phi_at(s[0]) - p.alpha * s[1] + h};
  };
}

double duffing_reduced_divergence(const DuffingParams& p) { return -p.alpha; }

double duffing_energy(const DuffingParams& p, double h, const State<2>& s) {
  return 0.5 * s[1] * s[1] + p.phi_primitive(s[0]) - h * s[0];
}

State<3> duffing_lift(const DuffingParams& p, double h, const State<2>& s) {
  return {s[0], s[1], h - p.phi_at(s[0]) - p.alpha * s[1]};
}

double duffing_equilibrium(const DuffingParams& p, double h) {
  std::vector<double> c = p.phi;
  if (c.empty()) c.push_back(0.0);
  c[0] -= h;
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.size() < 2) fail(ErrorCode::PreconditionViolated, "phi(x) = h has no isolated root");

  // Cauchy bound on the real roots.
  double bound = 0.0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) bound = std::max(bound, std::abs(c[k] / c.back()));
  bound += 1.0;

  auto g = [&](double x) { return p.phi_at(x) - h; };
  const int n = 4000;
  double best = std::numeric_limits<double>::quiet_NaN();
  double x0 = -bound, g0 = g(x0);
  for (int i = 1; i <= n; ++i) {
    const double x1 = -bound + 2.0 * bound * i / n;
    const double g1 = g(x1);
    double root = std::numeric_limits<double>::quiet_NaN();
    if (g1 == 0.0) {
      root = x1;
    } else if (g0 != 0.0 && (g0 < 0.0) != (g1 < 0.0)) {
      std::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(
          g, x0, x1, g0, g1, boost::math::tools::eps_tolerance<double>(52), iters);
      root = 0.5 * (r.first + r.second);
    }
    if (std::isfinite(root) && p.m_at(root) > 0.0) best = root;
    x0 = x1;
    g0 = g1;
  }
  if (!std::isfinite(best)) {
    fail(ErrorCode::PreconditionViolated, "phi(x) = h has no root with phi' > 0");
  }
  return best;
}

namespace {

EventSpec<2> section(double x_eq, bool terminal) {
  EventSpec<2> ev;
  ev.fn = [](double, const State<2>& s) { return s[1]; };
  ev.direction = -1;
  ev.terminal = terminal;
  ev.accept = [x_eq](double, const State<2>& s) { return s[0] > x_eq; };
  return ev;
}

}  // namespace

std::optional<double> duffing_return(const DuffingParams& p, double h, double amplitude,
                                     const IntegratorConfig& cfg) {
  const double x_eq = duffing_equilibrium(p, h);
  IntegratorConfig run = cfg;
  run.record = false;
  const EventSpec<2> ev[] = {section(x_eq, true)};
  const auto res = integrate(duffing_reduce(p, h), 0.0, State<2>{x_eq + amplitude, 0.0},
                             run.max_time, run, std::span<const EventSpec<2>>(ev));
  if (res.status != IntegrationStatus::Event) return std::nullopt;
  return res.final_state[0] - x_eq;
}

std::string_view to_string(DuffingVerdict v) {
  switch (v) {
    case DuffingVerdict::NoPeriodicOrbits: return "NoPeriodicOrbits";
    case DuffingVerdict::HamiltonianFoliation: return "HamiltonianFoliation";
  }
  return "Unknown";
}

AuditReport duffing_audit(const DuffingParams& p, double h, double t_final,
                          const IntegratorConfig& cfg, double amplitude0) {
  if (!(t_final > 0.0 && amplitude0 > 0.0)) {
    fail(ErrorCode::PreconditionViolated, "duffing_audit needs t_final > 0 and amplitude0 > 0");
  }
  AuditReport rep;
  rep.divergence = duffing_reduced_divergence(p);
  rep.verdict = p.alpha == 0.0 ? DuffingVerdict::HamiltonianFoliation
                               : DuffingVerdict::NoPeriodicOrbits;

  const double x_eq = duffing_equilibrium(p, h);
  const State<2> start{x_eq + amplitude0, 0.0};

  IntegratorConfig run = cfg;
  run.record = false;
  const EventSpec<2> ev[] = {section(x_eq, false)};
  const auto planar = integrate(duffing_reduce(p, h), 0.0, start, t_final, run,
                                std::span<const EventSpec<2>>(ev));
  rep.amplitudes.push_back(amplitude0);
  for (const auto& hit : planar.events) {
    const double a = hit.state[0] - x_eq;
    if (a < 1e-8 * amplitude0) break;
    rep.amplitudes.push_back(a);
  }
  rep.revolutions = rep.amplitudes.size() - 1;

  if (rep.revolutions >= 1) {
    const double n = static_cast<double>(rep.amplitudes.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < rep.amplitudes.size(); ++i) {
      const double x = static_cast<double>(i), y = rep.amplitudes[i];
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    rep.amplitude_trend = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.one_signed = rep.amplitude_trend != 0.0;
    for (std::size_t i = 1; i < rep.amplitudes.size(); ++i) {
      const double d = rep.amplitudes[i] - rep.amplitudes[i - 1];
      rep.max_return_displacement = std::max(rep.max_return_displacement, std::abs(d));
      if (!(d * rep.amplitude_trend > 0.0)) rep.one_signed = false;
    }
  }

  IntegratorConfig run3 = cfg;
  run3.record = true;
  const auto space = integrate(duffing_field(p), 0.0, duffing_lift(p, h, start), t_final, run3);
  for (const auto& s : space.trajectory.states) {
    rep.invariant_drift = std::max(rep.invariant_drift, std::abs(duffing_invariant(p, s) - h));
  }
  return rep;
}

}  // namespace btu
