#pragma once

// Cubic memristor oscillators
//
//   x' = a11 W(z) x + a12 y,  y' = a21 x + a22 y,  z' = x,
//
// with W = q', q(z) = c z^3 + a z^2 + b z. Every leaf of the first integral
// carries a Lienard system which maps onto the unfolding in core.hpp.

#include <optional>
#include <string>
#include <vector>

#include "btu/core.hpp"
#include "btu/flow.hpp"
#include "btu/ode.hpp"

namespace btu {

using SpaceState = State<3>;
using SpaceTrajectory = Trajectory<3>;

struct GeneralFamily {
  double a11 = -1.0;
  double a12 = 1.0;
  double a21 = 0.0;
  double a22 = 0.0;
  double c = 1.0;
  double a = 0.0;
  double b = 0.0;

  double q(double z) const { return ((c * z + a) * z + b) * z; }
  double w(double z) const { return (3.0 * c * z + 2.0 * a) * z + b; }
  // Lienard functions: X' = Y - F(X), Y' = -g(X) + h.
  double lienard_f(double x) const { return -a11 * q(x) - a22 * x; }
  double lienard_g(double x) const { return a11 * a22 * q(x) - a12 * a21 * x; }
};

/// Memristor oscillator with alpha removed: x' = -W(z) x + y, y' = -xi x + beta y, z' = x,
/// W(z) = 3z^2 + 2az + b. `alpha` remembers the circuit value it came from.
struct MemristorParams {
  double a = 0.0;
  double b = 0.0;
  double beta = 0.0;
  double xi = 0.0;
  std::optional<double> alpha;
};

/// Circuit form x' = alpha (y - W(z) x), y' = -xi x + beta y, z' = x.
struct CircuitParams {
  double a = 0.0;
  double b = 0.0;
  double beta = 0.0;
  double xi = 0.0;
  double alpha = 1.0;
};

/// a11 = -1, a12 = 1, a21 = -xi, a22 = beta, c = 1.
GeneralFamily to_family(const MemristorParams& p);

/// Removes alpha while keeping the cubic coefficient at 1:
/// x~ = sqrt(alpha) x, y~ = alpha^(3/2) y, z~ = sqrt(alpha) z,
/// a~ = sqrt(alpha) a, b~ = alpha b, xi~ = alpha xi, beta unchanged.
MemristorParams normalize_alpha(const CircuitParams& raw);
CircuitParams denormalize_alpha(const MemristorParams& p);
SpaceState normalize_state(const SpaceState& raw, double alpha);
SpaceState denormalize_state(const SpaceState& s, double alpha);

Field<3> general_field(const GeneralFamily& g);
Field<3> memristor_field(const MemristorParams& p);
Field<3> circuit_field(const CircuitParams& raw);

/// -a22 x + a12 y - a12 a21 z + a11 a22 q(z).
double first_integral(const GeneralFamily& g, const SpaceState& s);
double first_integral(const MemristorParams& p, const SpaceState& s);

/// Lienard field on the leaf h. Throws ZeroA12.
Field<2> lienard_reduce(const GeneralFamily& g, double h);

/// Leaf point above a Lienard state: x = Y - F(X),
/// y = ((a22^2 + a12 a21) X + a22 Y + h) / a12, z = X. Throws ZeroA12.
SpaceState lift_point(const GeneralFamily& g, double h, PlanarState lienard);
SpaceTrajectory lift(const GeneralFamily& g, double h, const Trajectory<2>& planar);

enum class CanonicalBranch { A, B };

/// y' = mu1 + mu2 x + cubic x^3 + mu3 y + cross x^2 y after
/// x_c = (X + a/(3c)) / x_scale, tau_c = time_scale t.
struct CanonicalForm {
  CanonicalBranch branch = CanonicalBranch::A;
  MuParams mu;
  double cubic = 0.0;
  double cross = 0.0;
  double x_shift = 0.0;
  double x_scale = 1.0;
  double time_scale = 1.0;
};

/// Branch A needs a22 != 0 and a11 a22 < 0, branch B needs a22 = 0; anything
/// else throws BranchUnavailable.
CanonicalForm to_canonical(const GeneralFamily& g, double h);

/// Closed form for the memristor oscillator (beta > 0).
MuParams to_canonical(const MemristorParams& p, double h);

/// Lienard state (X, Y) to canonical (x, y) and back.
PlanarState lienard_to_canonical(const GeneralFamily& g, const CanonicalForm& cf,
                                 PlanarState lienard);
PlanarState canonical_to_lienard(const GeneralFamily& g, const CanonicalForm& cf,
                                 PlanarState canonical);

struct Hypothesis {
  std::string name;
  bool holds = false;
};

struct SphereBounds {
  double A = 0.0;
  double B = 0.0;
  // Interval from A and B: (-A/27, B/27).
  double h_lo = 0.0;
  double h_hi = 0.0;
  // Interval where the central equilibrium is unstable, from the Hopf line
  // through the Bogdanov-Takens points; nested inside (h_lo, h_hi).
  double hopf_h_lo = 0.0;
  double hopf_h_hi = 0.0;
  std::vector<Hypothesis> hypotheses;

  bool all_hold() const;
};

/// A, B, both intervals and the hypothesis report, without throwing.
SphereBounds sphere_report(const MemristorParams& p);

/// sphere_report that throws HypothesesViolated listing the failed inequalities.
SphereBounds sphere_bounds(const MemristorParams& p);

struct SkippedSlice {
  double h = 0.0;
  std::string reason;
};

struct SphereSlices {
  MemristorParams params;
  std::vector<double> h_values;
  std::vector<SpaceTrajectory> orbits;
  std::vector<double> amplitudes;  // half-width in z of each orbit
  std::vector<SkippedSlice> skipped;
};

/// Chebyshev nodes on the Hopf-bounded h-interval; for each leaf the stable
/// cycle of the canonical system is found, mapped to the Lienard plane and
/// lifted. Slices whose cycle cannot be found or is narrower than 1e-4 are
/// reported in `skipped`.
SphereSlices sphere_slices(const MemristorParams& p, std::size_t n_slices,
                           const IntegratorConfig& cfg = {});

/// Closed cycle of the leaf h, lifted to 3D; CycleNotFound when absent.
SpaceTrajectory leaf_cycle(const MemristorParams& p, double h, const IntegratorConfig& cfg = {});

}  // namespace btu
