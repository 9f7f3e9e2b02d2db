#include "btu/core.hpp"

#include <cmath>

#include "btu/errors.hpp"

namespace btu {

bool is_finite(const MuParams& mu) {
  return std::isfinite(mu.mu1) && std::isfinite(mu.mu2) && std::isfinite(mu.mu3);
}

PlanarState unfolding_field(const MuParams& mu, PlanarState s) {
  const double x2 = s.x * s.x;
  return {s.y, mu.mu1 + mu.mu2 * s.x + x2 * s.x + s.y * (mu.mu3 - 3.0 * x2)};
}

double unfolding_divergence(const MuParams& mu, double x) { return mu.mu3 - 3.0 * x * x; }

NuParams to_nu(const MuParams& mu, Scaling scaling) {
  if (!(mu.mu3 > 0.0)) {
    fail(ErrorCode::NonPositiveMu3, "nu3 normalization needs mu3 > 0");
  }
  NuParams nu;
  nu.scaling = scaling;
  nu.eps = std::sqrt(mu.mu3);
  nu.nu3 = 1.0;
  nu.nu2 = -mu.mu2 / mu.mu3;
  nu.nu1 = scaling == Scaling::QuarticA ? mu.mu1 / (mu.mu3 * mu.mu3)
                                        : mu.mu1 / (mu.mu3 * nu.eps);
  return nu;
}

MuParams to_mu(const NuParams& nu) {
  const double e2 = nu.eps * nu.eps;
  const double e_pow = nu.scaling == Scaling::QuarticA ? e2 * e2 : e2 * nu.eps;
  return {e_pow * nu.nu1, -e2 * nu.nu2, e2 * nu.nu3};
}

double hamiltonian_value(const HamiltonianKind& h, PlanarState s) {
  const double x2 = s.x * s.x;
  double value = 0.5 * s.y * s.y + 0.5 * h.nu2 * x2 - 0.25 * x2 * x2;
  if (h.kind == HamiltonianKind::H2) value -= h.nu1 * s.x;
  return value;
}

PlanarState perturbed_field(const NuParams& nu, PlanarState s) {
  const double x2 = s.x * s.x;
  const double damping = nu.nu3 * s.y - 3.0 * x2 * s.y;
  if (nu.scaling == Scaling::QuarticA) {
    return {s.y, -nu.nu2 * s.x + x2 * s.x + nu.eps * (nu.nu1 + damping)};
  }
  return {s.y, nu.nu1 - nu.nu2 * s.x + x2 * s.x + nu.eps * damping};
}

bool bendixson_excludes_cycles(const MuParams& mu) { return mu.mu3 <= 0.0; }

}  // namespace btu
