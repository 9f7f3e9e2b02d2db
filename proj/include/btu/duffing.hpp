#pragma once

// Memristor-based Duffing oscillator
//
//   x' = y,  y' = z,  z' = -alpha z - M(x) y,   M = phi',
//
// and its reduction along the leaves phi(x) + alpha y + z = h.

#include <optional>
#include <string_view>
#include <vector>

#include "btu/ode.hpp"

namespace btu {

struct DuffingParams {
  double alpha = 0.0;
  // phi(x) = sum_k phi[k] x^k
  std::vector<double> phi;

  static DuffingParams cubic(double alpha, double omega, double beta_d);

  double phi_at(double x) const;
  double m_at(double x) const;           // phi'
  double phi_primitive(double x) const;  // integral of phi from 0
};

Field<3> duffing_field(const DuffingParams& p);

/// phi(x) + alpha y + z.
double duffing_invariant(const DuffingParams& p, const State<3>& s);

/// x' = y, y' = -phi(x) - alpha y + h.
Field<2> duffing_reduce(const DuffingParams& p, double h);

/// Divergence of the reduced field, -alpha for every (x, y).
double duffing_reduced_divergence(const DuffingParams& p);

/// y^2/2 + Phi(x) - h x; conserved by the reduced field when alpha = 0.
double duffing_energy(const DuffingParams& p, double h, const State<2>& s);

/// z = h - phi(x) - alpha y.
State<3> duffing_lift(const DuffingParams& p, double h, const State<2>& s);

/// Largest root of phi(x) = h with phi' > 0 there (the centre of the reduced
/// system). Throws PreconditionViolated when there is none.
double duffing_equilibrium(const DuffingParams& p, double h);

/// Amplitude after one return to y = 0, x > x_eq, starting from (x_eq + amplitude, 0).
/// nullopt when the orbit does not come back within cfg.max_time.
std::optional<double> duffing_return(const DuffingParams& p, double h, double amplitude,
                                     const IntegratorConfig& cfg = {});

enum class DuffingVerdict { NoPeriodicOrbits, HamiltonianFoliation };

std::string_view to_string(DuffingVerdict v);

struct AuditReport {
  double divergence = 0.0;
  double invariant_drift = 0.0;   // max |H - h| along the 3D run
  double amplitude_trend = 0.0;   // least-squares slope of section amplitude per revolution
  std::vector<double> amplitudes; // x - x_eq at successive section crossings
  std::size_t revolutions = 0;
  bool one_signed = false;        // every return displacement has the sign of the trend
  double max_return_displacement = 0.0;
  DuffingVerdict verdict = DuffingVerdict::NoPeriodicOrbits;
};

/// Integrates the reduced system from (x_eq + amplitude0, 0) and records its
/// returns to y = 0, x > x_eq (x_eq solves phi(x_eq) = h). The 3D system is run
/// from the lifted start over the same time for the invariant drift. Returns
/// stop at t_final or once the amplitude falls below 1e-8 of its start value.
AuditReport duffing_audit(const DuffingParams& p, double h, double t_final,
                          const IntegratorConfig& cfg = {}, double amplitude0 = 1.0);

}  // namespace btu
