#pragma once

// Parameter spaces of the saddle-case unfolding
//
//   x' = y,   y' = mu1 + mu2 x + x^3 + y (mu3 - 3 x^2)
//
// together with its two perturbed-Hamiltonian rescalings.

#include <array>

namespace btu {

struct MuParams {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
};

/// QuarticA: mu1 = eps^4 nu1, mu2 = -eps^2 nu2, mu3 = eps^2 nu3.
/// CubicB:   mu1 = eps^3 nu1, mu2 = -eps^2 nu2, mu3 = eps^2 nu3.
enum class Scaling { QuarticA, CubicB };

struct NuParams {
  double nu1 = 0.0;
  double nu2 = 0.0;
  double nu3 = 1.0;
  double eps = 0.0;
  Scaling scaling = Scaling::QuarticA;
};

struct PlanarState {
  double x = 0.0;
  double y = 0.0;
};

inline std::array<double, 2> to_array(PlanarState s) { return {s.x, s.y}; }
inline PlanarState to_planar(const std::array<double, 2>& a) { return {a[0], a[1]}; }

/// H1 = y^2/2 + nu2 x^2/2 - x^4/4 (nu1 ignored); H2 = H1 - nu1 x.
struct HamiltonianKind {
  enum Kind { H1, H2 } kind = H1;
  double nu1 = 0.0;
  double nu2 = 0.0;
};

bool is_finite(const MuParams& mu);

PlanarState unfolding_field(const MuParams& mu, PlanarState s);

/// Divergence of the unfolding, mu3 - 3x^2.
double unfolding_divergence(const MuParams& mu, double x);

/// Rescale to nu-coordinates with nu3 normalized to 1 (eps = sqrt(mu3)).
/// Throws NonPositiveMu3 when mu3 <= 0.
NuParams to_nu(const MuParams& mu, Scaling scaling);
MuParams to_mu(const NuParams& nu);

double hamiltonian_value(const HamiltonianKind& h, PlanarState s);

/// Blown-up perturbed-Hamiltonian fields. For QuarticA:
///   x' = y,  y' = -nu2 x + x^3 + eps (nu1 + nu3 y - 3 x^2 y)
/// For CubicB:
///   x' = y,  y' = nu1 - nu2 x + x^3 + eps (nu3 y - 3 x^2 y)
PlanarState perturbed_field(const NuParams& nu, PlanarState s);

/// True when the divergence mu3 - 3x^2 cannot be positive anywhere, so the
/// planar flow has no periodic orbits by Bendixson's criterion.
bool bendixson_excludes_cycles(const MuParams& mu);

}  // namespace btu
