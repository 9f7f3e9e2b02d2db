#include "btu/melnikov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "btu/errors.hpp"

namespace btu {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

template <class F>
double integrate_gk(F f, double a, double b, double tol) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol, &err);
  if (!std::isfinite(value) || err > 100.0 * tol * (1.0 + std::abs(value))) {
    fail(ErrorCode::QuadratureNotConverged,
         "estimated error " + std::to_string(err) + " for value " + std::to_string(value));
  }
  return value;
}

struct AbsTol {
  double tol;
  bool operator()(double a, double b) const { return std::abs(a - b) <= tol; }
};

template <class F>
double toms748(F f, double lo, double hi, double tol) {
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, AbsTol{tol}, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

double m_het_closed(double nu1, double nu2, double nu3) {
  if (!(nu2 > 0.0)) fail(ErrorCode::NonPositiveNu2, "nu2 must be positive");
  return 2.0 / 15.0 * std::sqrt(nu2) *
         (15.0 * nu1 + 5.0 * kSqrt2 * nu2 * nu3 - 3.0 * kSqrt2 * nu2 * nu2);
}

double m_het_closed_lower(double nu1, double nu2, double nu3) {
  return m_het_closed(-nu1, nu2, nu3);
}

double m_het_quadrature(double nu1, double nu2, double nu3, double t_span, double tol) {
  if (!(nu2 > 0.0)) fail(ErrorCode::NonPositiveNu2, "nu2 must be positive");
  const double k = std::sqrt(nu2 / 2.0);
  // sech^2(k T) < 1e-14 once k T > acosh(1e7).
  const double t_min = std::acosh(1e7) / k;
  if (t_span <= 0.0) t_span = t_min;
  if (t_span < t_min) {
    fail(ErrorCode::PreconditionViolated, "t_span too short for the connection to settle");
  }
  const double sx = std::sqrt(nu2);
  auto integrand = [=](double t) {
    const double th = std::tanh(k * t);
    const double sech2 = 1.0 - th * th;
    const double x = sx * th;
    const double y = nu2 / kSqrt2 * sech2;
    return y * (nu1 + (nu3 - 3.0 * x * x) * y);
  };
  return integrate_gk(integrand, -t_span, 0.0, tol) + integrate_gk(integrand, 0.0, t_span, tol);
}

double het_mu1(double mu3, double mu2, int sign) {
  return static_cast<double>(sign) * kSqrt2 / 15.0 * mu2 * (3.0 * mu2 + 5.0 * mu3);
}

std::pair<Curve, Curve> het_curve(double mu3, Range mu2_range, std::size_t n) {
  if (!(mu3 > 0.0)) fail(ErrorCode::NonPositiveMu3, "heteroclinic curve requires mu3 > 0");
  if (n < 2) fail(ErrorCode::PreconditionViolated, "het_curve needs n >= 2");
  std::pair<Curve, Curve> out;
  out.first.label = "het+";
  out.second.label = "het-";
  out.first.mu3 = out.second.mu3 = mu3;
  for (std::size_t i = 0; i < n; ++i) {
    const double mu2 = mu2_range.lo + (mu2_range.hi - mu2_range.lo) * static_cast<double>(i) /
                                          static_cast<double>(n - 1);
    out.first.samples.push_back({mu2, het_mu1(mu3, mu2, +1)});
    out.second.samples.push_back({mu2, het_mu1(mu3, mu2, -1)});
  }
  return out;
}

HomoclinicLoop hom_loop_integrals(double nu1, double nu2, double tol) {
  if (!(nu2 > 0.0)) fail(ErrorCode::NonPositiveNu2, "nu2 must be positive");
  if (!(nu1 > 0.0) || !(27.0 * nu1 * nu1 - 4.0 * nu2 * nu2 * nu2 < 0.0)) {
    fail(ErrorCode::NoThreeEquilibria, "homoclinic loop needs nu1 > 0 and three equilibria");
  }
  const auto roots = depressed_cubic_roots(-nu2, nu1);
  if (roots.size() != 3) fail(ErrorCode::NoThreeEquilibria, "cubic has a repeated root");
  const double s = roots[2];
  // q(x) - q(s) = (x - s)^2 (x - x_bar)(x - x_far) / 4 with x_bar,far = -s +- omega.
  const double omega = std::sqrt(2.0 * (nu2 - s * s));
  const double x_bar = omega - s;
  const double x_far = -omega - s;
  // x = x_bar + u^2 absorbs the square root at the turning point; y+ dx becomes
  // sqrt2 (s - x) u^2 sqrt(x - x_far) du.
  auto ydx = [=](double u) {
    const double x = x_bar + u * u;
    return kSqrt2 * (s - x) * u * u * std::sqrt(x - x_far);
  };
  const double u_max = std::sqrt(s - x_bar);
  HomoclinicLoop loop;
  loop.s_r = s;
  loop.x_bar = x_bar;
  loop.area = 2.0 * integrate_gk(ydx, 0.0, u_max, tol);
  loop.melnikov = 2.0 * integrate_gk(
                            [&](double u) {
                              const double x = x_bar + u * u;
                              return (3.0 * x * x - 1.0) * ydx(u);
                            },
                            0.0, u_max, tol);
  return loop;
}

double hom_f1(double t) {
  const double c = std::cosh(t), s = std::sinh(t);
  return 720.0 * t - 320.0 * s + 240.0 * t * c * c * c - 320.0 * c * c * s -
         80.0 * c * c * c * c * s + 480.0 * t * c;
}

double hom_f2(double t) {
  const double c = std::cosh(t), s = std::sinh(t);
  return 1440.0 * t * c - 768.0 * s - c * c * c - 1344.0 * c * c * s - 48.0 * c * c * c * c * s;
}

double m_hom_closed(double theta, double nu2) {
  const double c2 = std::cosh(theta) * std::cosh(theta);
  return kSqrt2 * c2 / (c2 + 2.0) * (hom_f1(theta) + nu2 * hom_f2(theta));
}

namespace {

// Both numerator and denominator vanish like theta^5, and the hyperbolic form
// loses all digits below theta ~ 1e-2. Taylor series are used below theta = 1.
double nu2_series(double t) {
  const double t2 = t * t;
  double num = 0.0, den = 0.0;
  double fact_odd = 120.0;  // (2n+1)!
  double fact_even = 24.0;  // (2n)!
  double p3 = 243.0, p5 = 3125.0, p3e = 81.0, tp = 1.0;
  for (int n = 2; n < 40; ++n) {
    const double cn = (9.0 + p3) / fact_odd - 12.0 / fact_even;
    const double dn = (370.0 + 115.0 * p3 + p5) / fact_odd - 60.0 * (11.0 + p3e) / fact_even;
    num += cn * tp;
    den += dn * tp;
    if (std::abs(dn * tp) < 1e-18 * std::abs(den) && n > 4) break;
    tp *= t2;
    fact_even = fact_odd * (2.0 * n + 2.0);
    fact_odd = fact_even * (2.0 * n + 3.0);
    p3 *= 9.0;
    p5 *= 25.0;
    p3e *= 9.0;
  }
  return 10.0 * (std::cosh(2.0 * t) + 5.0) * num / (3.0 * den);
}

// Large-theta form: numerator terms scaled by e^{-3t}, denominator by e^{-5t},
// cosh 2t + 5 by e^{-2t}.
double nu2_scaled(double t) {
  auto sh = [t](double k, double m) {
    return 0.5 * (std::exp((k - m) * t) - std::exp(-(k + m) * t));
  };
  auto ch = [t](double k, double m) {
    return 0.5 * (std::exp((k - m) * t) + std::exp(-(k + m) * t));
  };
  const double front = ch(2.0, 2.0) + 5.0 * std::exp(-2.0 * t);
  const double num = 9.0 * sh(1.0, 3.0) + sh(3.0, 3.0) - 12.0 * t * ch(1.0, 3.0);
  const double den = 370.0 * sh(1.0, 5.0) + 115.0 * sh(3.0, 5.0) + sh(5.0, 5.0) -
                     60.0 * t * (11.0 * ch(1.0, 5.0) + ch(3.0, 5.0));
  return 10.0 * front * num / (3.0 * den);
}

}  // namespace

double nu2_of_theta(double theta) {
  if (!(theta > 0.0)) fail(ErrorCode::PreconditionViolated, "theta must be positive");
  return theta < 1.0 ? nu2_series(theta) : nu2_scaled(theta);
}

HomoclinicParam hom_param(double theta) {
  HomoclinicParam p;
  p.theta = theta;
  p.nu2 = nu2_of_theta(theta);
  const double sech = 1.0 / std::cosh(theta);
  const double w = 2.0 * sech * sech;
  const double s2 = p.nu2 / (1.0 + w);
  const double gap = p.nu2 * w / (1.0 + w);  // nu2 - s^2
  p.s_r = std::sqrt(s2);
  p.nu1 = p.s_r * gap;
  p.omega = std::sqrt(2.0 * gap);
  return p;
}

double nu1_of_theta(double theta) { return hom_param(theta).nu1; }

double h1(double x) {
  return 2.0 * x * (26.0 * std::cosh(2.0 * x) + std::cosh(4.0 * x) + 33.0) -
         5.0 * (10.0 * std::sinh(2.0 * x) + std::sinh(4.0 * x));
}

Nu2Minimum nu2_min(double tol) {
  const double lo = 1.0, hi = 2.0;
  if (!(h1(lo) < 0.0 && h1(hi) > 0.0)) fail(ErrorCode::BracketFailed, "h1 does not change sign on [1, 2]");
  Nu2Minimum m;
  m.theta_star = toms748(h1, lo, hi, tol);
  m.nu2_star = nu2_of_theta(m.theta_star);
  return m;
}

std::vector<double> default_theta_grid(std::size_t n, double lo, double hi) {
  if (n < 2 || !(lo > 0.0) || !(lo < hi)) {
    fail(ErrorCode::PreconditionViolated, "theta grid needs n >= 2 and 0 < lo < hi");
  }
  std::vector<double> grid(n);
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::pair<Curve, Curve> hom_curve(double mu3, const std::vector<double>& theta_grid) {
  if (!(mu3 > 0.0)) fail(ErrorCode::NonPositiveMu3, "homoclinic curve requires mu3 > 0");
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (!(theta_grid[i] > 0.0) || (i > 0 && !(theta_grid[i] > theta_grid[i - 1]))) {
      fail(ErrorCode::PreconditionViolated, "theta grid must be positive and increasing");
    }
  }
  std::pair<Curve, Curve> out;
  out.first.label = "hom+";
  out.second.label = "hom-";
  out.first.mu3 = out.second.mu3 = mu3;
  const double scale = mu3 * std::sqrt(mu3);
  for (double t : theta_grid) {
    const auto p = hom_param(t);
    out.first.samples.push_back({-mu3 * p.nu2, scale * p.nu1});
    out.second.samples.push_back({-mu3 * p.nu2, -scale * p.nu1});
  }
  out.first.param = out.second.param = theta_grid;
  return out;
}

std::optional<double> hom_theta_for_nu2(double nu2, bool upper) {
  static const Nu2Minimum peak = nu2_min();
  if (nu2 > peak.nu2_star) return std::nullopt;
  auto f = [nu2](double t) { return nu2_of_theta(t) - nu2; };
  if (upper) {
    constexpr double lo = 1e-8;
    if (nu2 < 1.0) return std::nullopt;
    if (f(lo) >= 0.0) return lo;
    return toms748(f, lo, peak.theta_star, 1e-15);
  }
  constexpr double hi = 60.0;
  if (nu2 < 5.0 / 3.0) return std::nullopt;
  if (f(hi) >= 0.0) return hi;
  return toms748(f, peak.theta_star, hi, 1e-15);
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
    case Region::R4: return "R4";
    case Region::R5: return "R5";
    case Region::R6: return "R6";
    case Region::Boundary: return "Boundary";
  }
  return "unknown";
}

double default_tol_boundary(const MuParams& mu) {
  return 1e-6 * (1.0 + std::abs(mu.mu1) + std::abs(mu.mu2));
}

RegionLabel classify_region(const MuParams& mu, double tol_boundary) {
  if (!(mu.mu3 > 0.0)) fail(ErrorCode::NonPositiveMu3, "region classification requires mu3 > 0");
  const double tol = tol_boundary < 0.0 ? default_tol_boundary(mu) : tol_boundary;
  const double w = std::abs(mu.mu1);
  const double mu3 = mu.mu3;
  const double hom_scale = mu3 * std::sqrt(mu3);
  const double nu2 = -mu.mu2 / mu3;

  std::optional<double> hom_upper, hom_lower;
  if (auto t = hom_theta_for_nu2(nu2, true)) hom_upper = hom_scale * nu1_of_theta(*t);
  if (auto t = hom_theta_for_nu2(nu2, false)) hom_lower = hom_scale * nu1_of_theta(*t);

  auto near = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  if (mu.mu2 <= 0.0 && near(w, std::sqrt(-4.0 * mu.mu2 * mu.mu2 * mu.mu2 / 27.0))) {
    return {Region::Boundary};
  }
  if (mu.mu2 < -mu3 && near(w, hopf_mu1(mu3, mu.mu2, +1))) return {Region::Boundary};
  if (near(mu.mu1, het_mu1(mu3, mu.mu2, +1)) || near(mu.mu1, het_mu1(mu3, mu.mu2, -1))) {
    return {Region::Boundary};
  }
  if ((hom_upper && near(w, *hom_upper)) || (hom_lower && near(w, *hom_lower))) {
    return {Region::Boundary};
  }

  if (discriminant(mu) > 0.0) return {Region::R6};
  const auto eqs = solve_equilibria(mu);
  if (eqs.size() != 3) return {Region::Boundary};
  const Equilibrium& centre = eqs[1];

  bool inside_lobe = false;
  if (nu2 <= 1.0) {
    inside_lobe = true;
  } else if (hom_upper) {
    inside_lobe = w < *hom_upper && (!hom_lower || w > *hom_lower);
  }
  const bool cycle = centre.trace > 0.0 && !inside_lobe;
  if (!cycle) return {Region::R5};

  const auto nu = to_nu(mu, Scaling::QuarticA);
  const bool upper_pos = m_het_closed(nu.nu1, nu.nu2, nu.nu3) > 0.0;
  const bool lower_pos = m_het_closed_lower(nu.nu1, nu.nu2, nu.nu3) > 0.0;
  if (!upper_pos && !lower_pos) return {Region::R1};
  if (upper_pos && !lower_pos) return {Region::R2};
  if (!upper_pos && lower_pos) return {Region::R3};
  return {Region::R4};
}

BifurcationSet assemble_bifset(double mu3, std::size_t resolution) {
  if (!(mu3 > 0.0)) fail(ErrorCode::NonPositiveMu3, "bifurcation set requires mu3 > 0");
  BifurcationSet set;
  set.mu3 = mu3;
  set.points = special_points(mu3);
  double lo = -3.0 * mu3;
  for (const auto& p : set.points) lo = std::min(lo, 1.25 * p.mu2);

  set.curves.push_back(saddle_node_curve(mu3, {lo, 0.0}, resolution));
  const double hopf_hi = std::nextafter(-mu3, -std::numeric_limits<double>::infinity());
  auto [hopf_p, hopf_m] = hopf_line(mu3, {lo, hopf_hi}, resolution);
  set.curves.push_back(std::move(hopf_p));
  set.curves.push_back(std::move(hopf_m));
  auto [het_p, het_m] = het_curve(mu3, {lo, 0.0}, resolution);
  set.curves.push_back(std::move(het_p));
  set.curves.push_back(std::move(het_m));
  // theta* is added so the curve reaches its leftmost mu2
  auto grid = default_theta_grid();
  grid.insert(std::upper_bound(grid.begin(), grid.end(), nu2_min().theta_star), nu2_min().theta_star);
  auto [hom_p, hom_m] = hom_curve(mu3, grid);
  set.curves.push_back(std::move(hom_p));
  set.curves.push_back(std::move(hom_m));
  return set;
}

}  // namespace btu
