#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "btu/core.hpp"

namespace btu {

enum class EquilibriumKind {
  Saddle,
  StableNode,
  UnstableNode,
  StableFocus,
  UnstableFocus,
  NonHyperbolic
};

std::string_view to_string(EquilibriumKind kind);

/// Equilibrium (x, 0) of the unfolding. det = -(mu2 + 3x^2), trace = mu3 - 3x^2.
struct Equilibrium {
  double x = 0.0;
  EquilibriumKind kind = EquilibriumKind::NonHyperbolic;
  double trace = 0.0;
  double det = 0.0;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct CurvePoint {
  double mu2 = 0.0;
  double mu1 = 0.0;
};

/// Sampled curve in the (mu2, mu1) plane at fixed mu3. `param` is either
/// empty or holds one parameter value per sample (theta for homoclinic curves).
struct Curve {
  std::string label;
  double mu3 = 0.0;
  std::vector<CurvePoint> samples;
  std::vector<double> param;
};

enum class CodimTwoLabel {
  BTplus,
  BTminus,
  Cusp,
  DHT,
  Schecter1p,
  Schecter1m,
  Schecter2p,
  Schecter2m
};

std::string_view to_string(CodimTwoLabel label);

struct CodimTwoPoint {
  CodimTwoLabel label = CodimTwoLabel::Cusp;
  double mu2 = 0.0;
  double mu1 = 0.0;
};

inline constexpr double kDefaultTolRoot = 1e-12;
inline constexpr double kDefaultTolIntersect = 1e-10;

/// Real roots of x^3 + p x + q, ascending. A double root is reported once.
std::vector<double> depressed_cubic_roots(double p, double q);

/// 27 mu1^2 + 4 mu2^3; negative exactly when three simple real roots exist.
double discriminant(double mu1, double mu2);
inline double discriminant(const MuParams& mu) { return discriminant(mu.mu1, mu.mu2); }

/// Hyperbolicity threshold used for classification, 1e-10 (1 + |mu2|).
double nonhyperbolic_tolerance(const MuParams& mu);

EquilibriumKind classify_equilibrium(const MuParams& mu, double x);

/// All equilibria sorted by x (1, 2 or 3 of them).
std::vector<Equilibrium> solve_equilibria(const MuParams& mu, double tol_root = kDefaultTolRoot);

/// Fold locus 27 mu1^2 + 4 mu2^3 = 0. Samples run along the lower branch
/// towards mu2_range.hi and back along the upper branch; n samples per branch.
Curve saddle_node_curve(double mu3, Range mu2_range, std::size_t n);

/// Hopf half-lines for the central equilibrium x = s sqrt(mu3/3), s = +1 (first)
/// and s = -1 (second): mu1 = -s [(mu3/3)^(3/2) + (mu3/3)^(1/2) mu2], mu2 < -mu3.
std::pair<Curve, Curve> hopf_line(double mu3, Range mu2_range, std::size_t n = 100);

/// Hopf value of |mu1| at mu2 (< -mu3): (mu3/3)^(1/2) |mu2| - (mu3/3)^(3/2).
double hopf_mu1(double mu3, double mu2, int sign);

/// Bogdanov-Takens points, cusp, double heteroclinic point and the four
/// fold/heteroclinic intersections, each polished by 2D Newton.
std::vector<CodimTwoPoint> special_points(double mu3,
                                          double tol_intersect = kDefaultTolIntersect);

/// Intersection points of the fold curve with both heteroclinic branches.
std::vector<CodimTwoPoint> schecter_points(double mu3,
                                           double tol_intersect = kDefaultTolIntersect);

/// Closed-form rho1/rho2 intersection expression, reported next to the
/// numerical points for comparison; nothing downstream uses it.
std::vector<CodimTwoPoint> schecter_points_closed_form(double mu3);

}  // namespace btu
