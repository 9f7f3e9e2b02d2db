#pragma once

// Adaptive Dormand-Prince 5(4) integrator with sign-change event location.
//
// Header-only because it is instantiated for planar (N = 2) and memristor
// (N = 3) state spaces.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "btu/errors.hpp"

namespace btu {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
using Field = std::function<State<N>(double, const State<N>&)>;

struct IntegratorConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 0.1;
  double max_time = 1000.0;
  double initial_step = 0.0;  // 0 selects a starting step automatically
  double min_step = 1e-14;    // relative to max(1, |t|)
  double escape_radius = std::numeric_limits<double>::infinity();
  double event_time_tol = 1e-12;
  bool record = true;
};

template <std::size_t N>
struct Trajectory {
  std::vector<double> times;
  std::vector<State<N>> states;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  const State<N>& back() const { return states.back(); }
};

template <std::size_t N>
struct EventSpec {
  std::function<double(double, const State<N>&)> fn;
  int direction = 0;  // +1 upward crossings only, -1 downward only, 0 both
  bool terminal = true;
  // Optional filter evaluated at the located crossing; rejected crossings are ignored.
  std::function<bool(double, const State<N>&)> accept;
};

template <std::size_t N>
struct EventHit {
  std::size_t event_index = 0;
  double t = 0.0;
  State<N> state{};
};

enum class IntegrationStatus { Completed, Event, Escaped };

template <std::size_t N>
struct IntegrationResult {
  Trajectory<N> trajectory;
  std::vector<EventHit<N>> events;
  IntegrationStatus status = IntegrationStatus::Completed;
  double final_time = 0.0;
  State<N> final_state{};
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

template <std::size_t N>
struct StepResult {
  State<N> y{};
  State<N> error{};
  State<N> k_last{};  // f(t + h, y), reused by the next step
};

namespace detail {

// Dormand & Prince (1980) tableau.
inline constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
inline constexpr double kA21 = 1.0 / 5.0;
inline constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
inline constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
inline constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                        kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
inline constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                        kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
inline constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                        kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
inline constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                        kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

template <std::size_t N>
double error_norm(const State<N>& err, const State<N>& y0, const State<N>& y1,
                  const IntegratorConfig& cfg) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(N));
}

template <std::size_t N>
double radius(const State<N>& y) {
  double r = 0.0;
  for (double v : y) r = std::max(r, std::abs(v));
  return r;
}

template <std::size_t N>
bool all_finite(const State<N>& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// One Dormand-Prince step of size h from (t, y) given k1 = f(t, y).
/// The returned y is the fifth-order solution (local extrapolation).
template <std::size_t N>
StepResult<N> dopri5_step(const Field<N>& f, double t, const State<N>& y, const State<N>& k1,
                          double h) {
  using namespace detail;
  State<N> tmp{};
  auto stage = [&](auto&& combine) {
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * combine(i);
    return tmp;
  };
  const State<N> k2 = f(t + kC2 * h, stage([&](std::size_t i) { return kA21 * k1[i]; }));
  const State<N> k3 =
      f(t + kC3 * h, stage([&](std::size_t i) { return kA31 * k1[i] + kA32 * k2[i]; }));
  const State<N> k4 = f(t + kC4 * h, stage([&](std::size_t i) {
                          return kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i];
                        }));
  const State<N> k5 = f(t + kC5 * h, stage([&](std::size_t i) {
                          return kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i];
                        }));
  const State<N> k6 = f(t + h, stage([&](std::size_t i) {
                          return kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] +
                                 kA65 * k5[i];
                        }));
  StepResult<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out.y[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB5 * k5[i] + kB6 * k6[i]);
  }
  out.k_last = f(t + h, out.y);
  for (std::size_t i = 0; i < N; ++i) {
    out.error[i] = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] + kE6 * k6[i] +
                        kE7 * out.k_last[i]);
  }
  return out;
}

/// Fixed-step propagation, used for convergence-order checks.
template <std::size_t N>
State<N> integrate_fixed(const Field<N>& f, double t0, State<N> y, double t1, std::size_t steps) {
  const double h = (t1 - t0) / static_cast<double>(steps);
  State<N> k1 = f(t0, y);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = t0 + static_cast<double>(n) * h;
    auto step = dopri5_step(f, t, y, k1, h);
    y = step.y;
    k1 = step.k_last;
  }
  return y;
}

namespace detail {

template <std::size_t N>
double initial_step(const Field<N>& f, double t0, const State<N>& y0, const State<N>& f0,
                    const IntegratorConfig& cfg, double span) {
  if (cfg.initial_step > 0.0) return std::min(cfg.initial_step, span);
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / N);
  d1 = std::sqrt(d1 / N);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  State<N> y1{};
  for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + h0 * f0[i];
  const State<N> f1 = f(t0 + h0, y1);
  double d2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
    d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
  }
  d2 = std::sqrt(d2 / N) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min({100.0 * h0, h1, cfg.max_step, span});
}

inline bool crossed(double g0, double g1, int direction) {
  if (g0 == 0.0) return false;
  const bool up = g0 < 0.0 && g1 >= 0.0;
  const bool down = g0 > 0.0 && g1 <= 0.0;
  if (direction > 0) return up;
  if (direction < 0) return down;
  return up || down;
}

}  // namespace detail

/// Integrate from (t0, y0) to t_end (t_end > t0). Terminal events stop the run
/// at the located crossing; the crossing state is the last trajectory sample.
template <std::size_t N>
IntegrationResult<N> integrate(const Field<N>& f, double t0, const State<N>& y0, double t_end,
                               const IntegratorConfig& cfg,
                               std::span<const EventSpec<N>> events = {}) {
  if (!(t_end > t0)) fail(ErrorCode::PreconditionViolated, "integrate: t_end must exceed t0");
  if (!(cfg.abs_tol > 0.0 && cfg.rel_tol > 0.0 && cfg.max_step > 0.0)) {
    fail(ErrorCode::PreconditionViolated, "integrate: tolerances and max_step must be positive");
  }
  IntegrationResult<N> res;
  double t = t0;
  State<N> y = y0;
  State<N> k1 = f(t, y);
  if (cfg.record) {
    res.trajectory.times.push_back(t);
    res.trajectory.states.push_back(y);
  }
  std::vector<double> g_prev(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].fn(t, y);

  double h = detail::initial_step(f, t0, y0, k1, cfg, t_end - t0);
  while (t < t_end) {
    h = std::min({h, cfg.max_step, t_end - t});
    const double h_min = cfg.min_step * std::max(1.0, std::abs(t));
    if (h < h_min && t_end - t > h_min) {
      fail(ErrorCode::StepSizeUnderflow, "step size underflow at t = " + std::to_string(t));
    }
    auto step = dopri5_step(f, t, y, k1, h);
    const double err = detail::all_finite(step.y) ? detail::error_norm(step.error, y, step.y, cfg)
                                                  : std::numeric_limits<double>::infinity();
    if (!(err <= 1.0)) {
      ++res.rejected_steps;
      const double factor = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= factor;
      continue;
    }
    ++res.accepted_steps;
    const double t_new = (t_end - t <= h) ? t_end : t + h;

    // Locate the earliest accepted crossing inside this step.
    std::optional<EventHit<N>> first_terminal;
    std::vector<EventHit<N>> found;
    std::vector<double> g_new(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) {
      g_new[e] = events[e].fn(t_new, step.y);
      if (!detail::crossed(g_prev[e], g_new[e], events[e].direction)) continue;
      const bool g0_positive = g_prev[e] > 0.0;
      double lo = 0.0, hi = h;
      State<N> y_hi = step.y;
      while (hi - lo > cfg.event_time_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const State<N> y_mid = dopri5_step(f, t, y, k1, mid).y;
        const double gm = events[e].fn(t + mid, y_mid);
        if ((gm > 0.0) == g0_positive && gm != 0.0) {
          lo = mid;
        } else {
          hi = mid;
          y_hi = y_mid;
        }
      }
      EventHit<N> hit{e, t + hi, y_hi};
      if (events[e].accept && !events[e].accept(hit.t, hit.state)) continue;
      found.push_back(hit);
      if (events[e].terminal && (!first_terminal || hit.t < first_terminal->t)) first_terminal = hit;
    }
    std::sort(found.begin(), found.end(),
              [](const EventHit<N>& a, const EventHit<N>& b) { return a.t < b.t; });
    for (const auto& hit : found) {
      if (first_terminal && hit.t > first_terminal->t) break;
      res.events.push_back(hit);
    }
    if (first_terminal) {
      if (cfg.record) {
        res.trajectory.times.push_back(first_terminal->t);
        res.trajectory.states.push_back(first_terminal->state);
      }
      res.status = IntegrationStatus::Event;
      res.final_time = first_terminal->t;
      res.final_state = first_terminal->state;
      return res;
    }

    t = t_new;
    y = step.y;
    k1 = step.k_last;
    g_prev = std::move(g_new);
    if (cfg.record) {
      res.trajectory.times.push_back(t);
      res.trajectory.states.push_back(y);
    }
    if (detail::radius(y) > cfg.escape_radius) {
      res.status = IntegrationStatus::Escaped;
      break;
    }
    const double factor = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    h *= factor;
  }
  res.final_time = t;
  res.final_state = y;
  return res;
}

/// Run until the first terminal event; MaxTimeExceeded when none occurs
/// within cfg.max_time (or the orbit escapes).
template <std::size_t N>
IntegrationResult<N> integrate_to_event(const Field<N>& f, double t0, const State<N>& y0,
                                        const IntegratorConfig& cfg,
                                        std::span<const EventSpec<N>> events) {
  auto res = integrate(f, t0, y0, t0 + cfg.max_time, cfg, events);
  if (res.status != IntegrationStatus::Event) {
    fail(ErrorCode::MaxTimeExceeded, "no terminal event before max_time");
  }
  return res;
}

/// Time-reversed field, for integrating backwards along stable manifolds.
template <std::size_t N>
Field<N> reversed(Field<N> f) {
  return [f = std::move(f)](double t, const State<N>& y) {
    State<N> v = f(-t, y);
    for (double& c : v) c = -c;
    return v;
  };
}

}  // namespace btu
