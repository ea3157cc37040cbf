#pragma once

#include <cmath>
#include <stdexcept>

#include "nvsim/units.hpp"

// Two-level emitter parameters and the closed-form results used as oracles
// for the numerical integrator: Torrey steady state, generalized Rabi
// frequency, detuned-amplitude factor, Rabi damping constant and the
// T2-limited Lorentzian linewidth.

namespace nvsim {

// Excited-state lifetime t1, pure dephasing time t2_star (both ns) and the
// power-to-Rabi conversion kappa (rad/ns per sqrt(uW), Omega0 = kappa*sqrt(P)).
struct EmitterParams {
  double t1 = 10.9;
  double t2_star = 10.0;
  double kappa = mhz_to_rad_ns(66.5);

  void validate() const {
    if (!(t1 > 0.0) || !std::isfinite(t1))
      throw std::invalid_argument("EmitterParams: t1 must be positive");
    if (!(t2_star > 0.0) || !std::isfinite(t2_star))
      throw std::invalid_argument("EmitterParams: t2_star must be positive");
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
      throw std::invalid_argument("EmitterParams: kappa must be >= 0");
  }
};

// gamma1 = population decay rate 1/T1; gamma2 = total coherence decay rate
// 1/T2 = 1/(2 T1) + 1/T2*. Both in 1/ns.
struct RateSet {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

inline RateSet derive_rates(const EmitterParams& params) {
  params.validate();
  return RateSet{1.0 / params.t1, 1.0 / (2.0 * params.t1) + 1.0 / params.t2_star};
}

// Generalized Rabi frequency sqrt(Omega0^2 + delta^2).
inline double rabi_generalized(double omega0, double delta) {
  return std::hypot(omega0, delta);
}

// Detuned oscillation amplitude factor Omega0^2 / (Omega0^2 + delta^2).
inline double rabi_amplitude_factor(double omega0, double delta) {
  if (omega0 == 0.0 && delta == 0.0)
    throw std::invalid_argument(
        "rabi_amplitude_factor: omega0 and delta cannot both be zero");
  const double o2 = omega0 * omega0;
  return o2 / (o2 + delta * delta);
}

// Torrey steady-state excited population. Saturation parameter
// s = Omega0^2 T1 T2 / (1 + delta^2 T2^2), rho_ee = (s/2)/(1+s).
inline double steady_state(double omega0, double delta, const RateSet& rates) {
  const double t1 = 1.0 / rates.gamma1;
  const double t2 = 1.0 / rates.gamma2;
  const double s =
      omega0 * omega0 * t1 * t2 / (1.0 + delta * delta * t2 * t2);
  return 0.5 * s / (1.0 + s);
}

// On-resonance saturation parameter (delta = 0).
inline double saturation_parameter(double omega0, const RateSet& rates) {
  return omega0 * omega0 / (rates.gamma1 * rates.gamma2);
}

// Damping constant of on-resonance Rabi oscillations,
// 1/tau = 3/(4 T1) + 1/(2 T2*).
inline double predicted_damping(const EmitterParams& params) {
  params.validate();
  return 1.0 / (3.0 / (4.0 * params.t1) + 1.0 / (2.0 * params.t2_star));
}

// FWHM, in MHz of ordinary frequency, of the unsaturated absorption line:
// angular FWHM 2*gamma2 -> gamma2/pi cycles per ns.
inline double lorentzian_fwhm_from_t2(double gamma2) {
  if (!(gamma2 > 0.0))
    throw std::invalid_argument("lorentzian_fwhm_from_t2: gamma2 must be > 0");
  return rad_ns_to_mhz(2.0 * gamma2);
}

}  // namespace nvsim
