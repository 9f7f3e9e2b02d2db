#pragma once

// Numerical ground truth for the unfolding: invariant-manifold shooting,
// homoclinic continuation and limit-cycle detection.

#include <optional>
#include <string>
#include <vector>

#include "btu/core.hpp"
#include "btu/equilibria.hpp"
#include "btu/ode.hpp"

namespace btu {

using PlanarTrajectory = Trajectory<2>;

Field<2> unfolding_ode(const MuParams& mu);

/// Integrate the unfolding from `start` over [0, t_end].
PlanarTrajectory integrate_unfolding(const MuParams& mu, PlanarState start, double t_end,
                                     const IntegratorConfig& cfg = {});

enum class ManifoldBranch { UnstablePlus, UnstableMinus, StablePlus, StableMinus };

/// Eigen-direction (1, lambda)/|.| of the saddle, negated for the Minus branches.
PlanarState manifold_direction(const MuParams& mu, const Equilibrium& saddle,
                               ManifoldBranch branch);

struct ManifoldShot {
  PlanarState crossing;
  double time = 0.0;
  // |y(delta) - y(delta/2)| at the crossing, filled when requested.
  std::optional<double> richardson_shift;
};

/// Follow one saddle separatrix from saddle + delta * eigenvector to the line
/// x = section_x. Unstable branches run forward, stable ones backward in time.
/// crossing_direction selects x increasing (+1), decreasing (-1) or either (0)
/// along the integration direction. Throws NoCrossing.
ManifoldShot saddle_manifold_shot(const MuParams& mu, const Equilibrium& saddle,
                                  ManifoldBranch branch, double delta, double section_x,
                                  const IntegratorConfig& cfg, int crossing_direction = 0,
                                  bool richardson = false);

inline constexpr double kDefaultManifoldDelta = 1e-6;

struct SplittingResult {
  MuParams mu;
  double gap = 0.0;
  double section_x = 0.0;
};

/// Separation y_unstable - y_stable of the right saddle's loop branches where
/// they return through x = s_C with y > 0. For mu1 < 0 the left saddle's loop is
/// used through the symmetry, so gap(mu1) = gap(-mu1) of the mirrored system.
SplittingResult homoclinic_splitting(const MuParams& mu, const IntegratorConfig& cfg = {},
                                     double delta = kDefaultManifoldDelta);

struct ContinuationPoint {
  double theta = 0.0;         // analytic seed parameter (NaN for mu2-driven runs)
  CurvePoint analytic;
  std::optional<CurvePoint> numeric;
  double gap = 0.0;
  std::string failure;        // empty when numeric holds a root
};

struct ContinuationResult {
  double mu3 = 0.0;
  std::vector<ContinuationPoint> points;

  Curve numeric_curve() const;
  Curve analytic_curve() const;
};

/// For each mu2 in the homoclinic window (-nu2* mu3, -mu3), root-finds gap(mu1) = 0
/// along mu1, seeded from the analytic hom+ branch with theta < theta*.
/// Throws RootNotBracketed when no sign change is found.
Curve homoclinic_continuation(double mu3, const std::vector<double>& mu2_samples,
                              const IntegratorConfig& cfg = {});

/// Same roots, seeded at the analytic points of the given theta values and
/// searched along the curve normal in (nu2, nu1) coordinates, which stays
/// well conditioned through the fold at theta*. Failures are recorded per point.
ContinuationResult homoclinic_continuation_theta(double mu3, const std::vector<double>& thetas,
                                                 const IntegratorConfig& cfg = {});

/// Stable limit cycle through the half-line y = 0, x > x_C, where x_C is the
/// centre equilibrium. Returns one period starting and ending on the section,
/// or nullopt with fewer than three equilibria, when the return map escapes or
/// when it collapses onto the equilibrium. seed.x picks the first section point; seed.x <= x_C picks
/// a default inside the saddle's basin.
std::optional<PlanarTrajectory> find_limit_cycle(const MuParams& mu, PlanarState seed,
                                                 const IntegratorConfig& cfg = {});

/// Return map of the section used by find_limit_cycle; nullopt when the orbit
/// does not come back.
std::optional<double> cycle_return_map(const MuParams& mu, double x0, const IntegratorConfig& cfg);

}  // namespace btu
