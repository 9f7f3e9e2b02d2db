#include "btu/equilibria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "btu/errors.hpp"
#include "btu/melnikov.hpp"

namespace btu {

std::string_view to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Saddle: return "saddle";
    case EquilibriumKind::StableNode: return "stable_node";
    case EquilibriumKind::UnstableNode: return "unstable_node";
    case EquilibriumKind::StableFocus: return "stable_focus";
    case EquilibriumKind::UnstableFocus: return "unstable_focus";
    case EquilibriumKind::NonHyperbolic: return "nonhyperbolic";
  }
  return "unknown";
}

std::string_view to_string(CodimTwoLabel label) {
  switch (label) {
    case CodimTwoLabel::BTplus: return "BT+";
    case CodimTwoLabel::BTminus: return "BT-";
    case CodimTwoLabel::Cusp: return "cusp";
    case CodimTwoLabel::DHT: return "DHT";
    case CodimTwoLabel::Schecter1p: return "S1+";
    case CodimTwoLabel::Schecter1m: return "S1-";
    case CodimTwoLabel::Schecter2p: return "S2+";
    case CodimTwoLabel::Schecter2m: return "S2-";
  }
  return "unknown";
}

double discriminant(double mu1, double mu2) { return 27.0 * mu1 * mu1 + 4.0 * mu2 * mu2 * mu2; }

namespace {

double cubic(double p, double q, double x) { return (x * x + p) * x + q; }

double polish(double p, double q, double x) {
  const double d = 3.0 * x * x + p;
  if (d == 0.0) return x;
  const double next = x - cubic(p, q, x) / d;
  return std::abs(cubic(p, q, next)) <= std::abs(cubic(p, q, x)) ? next : x;
}

}  // namespace

std::vector<double> depressed_cubic_roots(double p, double q) {
  if (p == 0.0 && q == 0.0) return {0.0};
  const double disc = discriminant(q, p);
  const double scale = 27.0 * q * q + 4.0 * std::abs(p * p * p);
  std::vector<double> roots;
  if (std::abs(disc) <= 1e-12 * scale) {
    // (x - r)^2 (x + 2r): p = -3 r^2, q = 2 r^3.
    const double r = -1.5 * q / p;
    roots = {polish(p, q, -2.0 * r), r};
  } else if (disc < 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    constexpr double kTwoThirdsPi = 2.0 * std::numbers::pi / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(polish(p, q, m * std::cos(phi - kTwoThirdsPi * k)));
  } else if (p < 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = -3.0 * std::abs(q) / (p * m);
    roots = {polish(p, q, -std::copysign(m, q) * std::cosh(std::acosh(arg) / 3.0))};
  } else if (p > 0.0) {
    const double m = 2.0 * std::sqrt(p / 3.0);
    roots = {polish(p, q, -m * std::sinh(std::asinh(3.0 * q / (p * m)) / 3.0))};
  } else {
    roots = {std::cbrt(-q)};
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double nonhyperbolic_tolerance(const MuParams& mu) { return 1e-10 * (1.0 + std::abs(mu.mu2)); }

EquilibriumKind classify_equilibrium(const MuParams& mu, double x) {
  const double det = -(mu.mu2 + 3.0 * x * x);
  const double trace = mu.mu3 - 3.0 * x * x;
  const double tol = nonhyperbolic_tolerance(mu);
  if (det < -tol) return EquilibriumKind::Saddle;
  if (std::abs(det) <= tol || std::abs(trace) <= tol) return EquilibriumKind::NonHyperbolic;
  const bool node = trace * trace - 4.0 * det >= 0.0;
  if (trace < 0.0) return node ? EquilibriumKind::StableNode : EquilibriumKind::StableFocus;
  return node ? EquilibriumKind::UnstableNode : EquilibriumKind::UnstableFocus;
}

std::vector<Equilibrium> solve_equilibria(const MuParams& mu, double tol_root) {
  std::vector<Equilibrium> out;
  for (double x : depressed_cubic_roots(mu.mu2, mu.mu1)) {
    // A second polish step only when the first one left a residual above tol_root.
    if (std::abs(cubic(mu.mu2, mu.mu1, x)) > tol_root) x = polish(mu.mu2, mu.mu1, x);
    Equilibrium eq;
    eq.x = x;
    eq.det = -(mu.mu2 + 3.0 * x * x);
    eq.trace = mu.mu3 - 3.0 * x * x;
    eq.kind = classify_equilibrium(mu, x);
    out.push_back(eq);
  }
  return out;
}

Curve saddle_node_curve(double mu3, Range mu2_range, std::size_t n) {
  if (mu2_range.hi > 0.0 || mu2_range.lo > 0.0) {
    fail(ErrorCode::PositiveMu2InRange, "saddle-node curve exists only for mu2 <= 0");
  }
  if (n < 2 || !(mu2_range.lo < mu2_range.hi)) {
    fail(ErrorCode::PreconditionViolated, "saddle_node_curve needs n >= 2 and lo < hi");
  }
  Curve curve;
  curve.label = "saddle_node";
  curve.mu3 = mu3;
  std::vector<double> mu2s(n);
  for (std::size_t i = 0; i < n; ++i) {
    mu2s[i] = mu2_range.lo + (mu2_range.hi - mu2_range.lo) * static_cast<double>(i) /
                                 static_cast<double>(n - 1);
  }
  auto branch = [](double mu2) { return std::sqrt(std::max(0.0, -4.0 * mu2 * mu2 * mu2 / 27.0)); };
  for (double mu2 : mu2s) curve.samples.push_back({mu2, -branch(mu2)});
  const bool cusp = mu2_range.hi == 0.0;
  for (std::size_t i = n; i-- > 0;) {
    if (cusp && i == n - 1) continue;
    curve.samples.push_back({mu2s[i], branch(mu2s[i])});
  }
  return curve;
}

double hopf_mu1(double mu3, double mu2, int sign) {
  const double r = std::sqrt(mu3 / 3.0);
  return -static_cast<double>(sign) * (r * r * r + r * mu2);
}

std::pair<Curve, Curve> hopf_line(double mu3, Range mu2_range, std::size_t n) {
  if (!(mu3 > 0.0)) fail(ErrorCode::NonPositiveMu3, "Hopf line requires mu3 > 0");
  if (!(mu2_range.hi < -mu3) || !(mu2_range.lo < mu2_range.hi)) {
    fail(ErrorCode::RangeOutsideValidity, "Hopf line exists only for mu2 < -mu3");
  }
  if (n < 2) fail(ErrorCode::PreconditionViolated, "hopf_line needs n >= 2");
  std::pair<Curve, Curve> out;
  out.first.label = "hopf+";
  out.second.label = "hopf-";
  out.first.mu3 = out.second.mu3 = mu3;
  for (std::size_t i = 0; i < n; ++i) {
    const double mu2 = mu2_range.lo + (mu2_range.hi - mu2_range.lo) * static_cast<double>(i) /
                                          static_cast<double>(n - 1);
    out.first.samples.push_back({mu2, hopf_mu1(mu3, mu2, +1)});
    out.second.samples.push_back({mu2, hopf_mu1(mu3, mu2, -1)});
  }
  return out;
}

std::vector<CodimTwoPoint> schecter_points(double mu3, double tol_intersect) {
  if (!(mu3 > 0.0)) fail(ErrorCode::NonPositiveMu3, "Schecter points require mu3 > 0");
  // Eliminating mu1 between the fold and heteroclinic curves leaves
  // 27 mu2^2 + (90 mu3 + 50) mu2 + 75 mu3^2 = 0.
  const double a = 27.0, b = 90.0 * mu3 + 50.0, c = 75.0 * mu3 * mu3;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) fail(ErrorCode::NoIntersection, "fold and heteroclinic curves do not meet");
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + sq);
  std::array<double, 2> seeds{c / q, q / a};  // small-|mu2| root first
  std::vector<CodimTwoPoint> out;
  const std::array<std::array<CodimTwoLabel, 2>, 2> labels{
      {{CodimTwoLabel::Schecter1p, CodimTwoLabel::Schecter1m},
       {CodimTwoLabel::Schecter2p, CodimTwoLabel::Schecter2m}}};
  for (std::size_t r = 0; r < 2; ++r) {
    if (!(seeds[r] < 0.0)) fail(ErrorCode::NoIntersection, "no negative mu2 intersection");
    for (int target : {+1, -1}) {
      double mu2 = seeds[r];
      // Pick the heteroclinic branch whose mu1 has the requested sign.
      const int het_sign = het_mu1(mu3, mu2, +1) * target > 0.0 ? +1 : -1;
      double mu1 = het_mu1(mu3, mu2, het_sign);
      for (int it = 0; it < 50; ++it) {
        const double f1 = discriminant(mu1, mu2);
        const double f2 = mu1 - het_mu1(mu3, mu2, het_sign);
        // d/dmu2 of the heteroclinic branch: sign*(sqrt2/15)(6 mu2 + 5 mu3)
        const double dhet = het_sign * std::numbers::sqrt2 / 15.0 * (6.0 * mu2 + 5.0 * mu3);
        const double j11 = 12.0 * mu2 * mu2, j12 = 54.0 * mu1;
        const double j21 = -dhet, j22 = 1.0;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0) break;
        const double d2 = (f1 * j22 - j12 * f2) / det;
        const double d1 = (j11 * f2 - j21 * f1) / det;
        mu2 -= d2;
        mu1 -= d1;
        if (std::abs(d2) + std::abs(d1) <= 1e-17 * (1.0 + std::abs(mu2))) break;
      }
      const double r1 = std::abs(discriminant(mu1, mu2));
      const double r2 = std::abs(mu1 - het_mu1(mu3, mu2, het_sign));
      if (r1 > tol_intersect || r2 > tol_intersect) {
        fail(ErrorCode::NoIntersection, "intersection did not converge");
      }
      out.push_back({labels[r][target > 0 ? 0 : 1], mu2, mu1});
    }
  }
  return out;
}

std::vector<CodimTwoPoint> schecter_points_closed_form(double mu3) {
  const double root = std::sqrt(18.0 * mu3 + 5.0);
  const double s5 = std::sqrt(5.0);
  const double rho1 = 9.0 * mu3 + 5.0 - s5 * root;
  const double rho2 = s5 * root - 9.0 * mu3 - 5.0;
  const double k = 5.0 * std::sqrt(10.0) / 729.0;
  return {
      {CodimTwoLabel::Schecter1p, rho1 * 5.0 / 27.0, -rho1 * k * (root + s5)},
      {CodimTwoLabel::Schecter1m, rho1 * 5.0 / 27.0, rho1 * k * (root + s5)},
      {CodimTwoLabel::Schecter2p, rho2 * 5.0 / 27.0, rho2 * k * (root - s5)},
      {CodimTwoLabel::Schecter2m, rho2 * 5.0 / 27.0, -rho2 * k * (root - s5)},
  };
}

std::vector<CodimTwoPoint> special_points(double mu3, double tol_intersect) {
  if (!(mu3 > 0.0)) fail(ErrorCode::NonPositiveMu3, "special points require mu3 > 0");
  const double bt = 2.0 * std::pow(mu3 / 3.0, 1.5);
  std::vector<CodimTwoPoint> out{
      {CodimTwoLabel::BTplus, -mu3, bt},
      {CodimTwoLabel::BTminus, -mu3, -bt},
      {CodimTwoLabel::Cusp, 0.0, 0.0},
      {CodimTwoLabel::DHT, -5.0 * mu3 / 3.0, 0.0},
  };
  for (const auto& p : schecter_points(mu3, tol_intersect)) out.push_back(p);
  return out;
}

}  // namespace btu
