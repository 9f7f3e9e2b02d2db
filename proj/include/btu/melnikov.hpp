#pragma once

// Melnikov functions of the heteroclinic and homoclinic connections, the
// global bifurcation curves they produce, and region classification.
//
// Heteroclinic quantities live in QuarticA coordinates, homoclinic ones in
// CubicB coordinates, both with nu3 = 1 unless given explicitly.

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "btu/core.hpp"
#include "btu/equilibria.hpp"

namespace btu {

/// (2/15) sqrt(nu2) (15 nu1 + 5 sqrt2 nu2 nu3 - 3 sqrt2 nu2^2), upper connection.
double m_het_closed(double nu1, double nu2, double nu3);

/// Same integral along the lower connection (x, y) -> (-x, -y).
double m_het_closed_lower(double nu1, double nu2, double nu3);

/// Adaptive quadrature of the heteroclinic Melnikov integral along
/// x = sqrt(nu2) tanh(k t), k = sqrt(nu2/2). t_span <= 0 picks the
/// smallest span with sech^2(k t_span) < 1e-14.
double m_het_quadrature(double nu1, double nu2, double nu3, double t_span = 0.0,
                        double tol = 1e-13);

/// mu1 on the heteroclinic branch: sign (sqrt2/15) mu2 (3 mu2 + 5 mu3).
double het_mu1(double mu3, double mu2, int sign);

/// het+ (sign +1) and het- on an evenly spaced mu2 grid.
std::pair<Curve, Curve> het_curve(double mu3, Range mu2_range, std::size_t n);

struct HomoclinicLoop {
  double melnikov = 0.0;  // 2 * integral of (3x^2 - 1) y+ dx
  double area = 0.0;      // area enclosed by the loop
  double x_bar = 0.0;     // left turning point of the loop
  double s_r = 0.0;       // right saddle
};

/// Loop of the unperturbed CubicB Hamiltonian through the right saddle, with
/// the Melnikov integral and enclosed area. Needs 27 nu1^2 - 4 nu2^3 < 0, nu1 > 0.
HomoclinicLoop hom_loop_integrals(double nu1, double nu2, double tol = 1e-13);

inline double m_hom_area(double nu1, double nu2, double tol = 1e-13) {
  return hom_loop_integrals(nu1, nu2, tol).melnikov;
}

double hom_f1(double theta);
double hom_f2(double theta);

/// sqrt2 cosh^2 / (cosh^2 + 2) (F1 + nu2 F2) with F1, F2 taken literally.
/// Its zero set does not match nu2_of_theta; kept for comparison only.
double m_hom_closed(double theta, double nu2);

struct HomoclinicParam {
  double theta = 0.0;
  double nu2 = 0.0;
  double nu1 = 0.0;
  double s_r = 0.0;
  double omega = 0.0;
};

double nu2_of_theta(double theta);
double nu1_of_theta(double theta);
HomoclinicParam hom_param(double theta);

/// 2x (26 cosh 2x + cosh 4x + 33) - 5 (10 sinh 2x + sinh 4x); its positive
/// zero is the minimiser of nu2_of_theta.
double h1(double x);

struct Nu2Minimum {
  double theta_star = 0.0;
  double nu2_star = 0.0;
};

/// Root of h1 bracketed in [1, 2] to absolute tolerance tol.
Nu2Minimum nu2_min(double tol = 1e-14);

/// 60 geometric points from 1e-3 to 30.
std::vector<double> default_theta_grid(std::size_t n = 60, double lo = 1e-3, double hi = 30.0);

/// hom+ / hom-: mu2 = -mu3 nu2(theta), mu1 = +-mu3^(3/2) nu1(theta). param holds theta.
std::pair<Curve, Curve> hom_curve(double mu3, const std::vector<double>& theta_grid);

/// theta on the branch theta < theta* (upper = true) or theta > theta* with
/// nu2(theta) = nu2. Returns nullopt when nu2 is outside the branch's range.
std::optional<double> hom_theta_for_nu2(double nu2, bool upper);

enum class Region { R1, R2, R3, R4, R5, R6, Boundary };

std::string_view to_string(Region region);

struct RegionLabel {
  Region region = Region::Boundary;
};

/// Default boundary tolerance 1e-6 (1 + |mu1| + |mu2|).
double default_tol_boundary(const MuParams& mu);

/// R1..R4: three equilibria with a limit cycle around the centre, keyed by the
/// signs of the upper/lower heteroclinic Melnikov functions: R1 (-,-), R2 (+,-),
/// R3 (-,+), R4 (+,+). R5: three equilibria, no cycle. R6: one equilibrium.
/// tol_boundary < 0 selects the default.
RegionLabel classify_region(const MuParams& mu, double tol_boundary = -1.0);

struct BifurcationSet {
  double mu3 = 0.0;
  std::vector<Curve> curves;
  std::vector<CodimTwoPoint> points;
};

BifurcationSet assemble_bifset(double mu3, std::size_t resolution = 200);

}  // namespace btu
