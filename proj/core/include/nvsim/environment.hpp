#pragma once

#include <stdexcept>

#include "nvsim/rng.hpp"
#include "nvsim/units.hpp"

// Monte Carlo model of the fluctuating charge environment: every green
// repump re-draws the emitter's spectral position from a Gaussian (DC Stark
// shifts from the re-arranged charge environment), and resonant driving can
// photo-ionize the center, which stays dark until the next repump.

namespace nvsim {

// Gaussian jump distribution of the detuning offset; jump_fwhm_b is the FWHM
// in rad/ns (sigma = FWHM / 2.355).
struct SpectralModel {
  double jump_fwhm_b = mhz_to_rad_ns(40.0);
  double center_offset = 0.0;

  void validate() const {
    if (!(jump_fwhm_b >= 0.0))
      throw std::invalid_argument("SpectralModel: jump_fwhm_b must be >= 0");
  }

  double sigma() const { return jump_fwhm_b / 2.355; }
};

// Two-photon ionization coefficient k_ion (1/(ns*uW)): the ionization rate
// is k_ion * P * rho_ee, proportional to power once the transition
// saturates. repump_success is the recharge probability per green pulse.
struct IonizationModel {
  double k_ion = 2e-9;
  double repump_success = 1.0;
  bool probe_ionization = true;

  void validate() const {
    if (!(k_ion >= 0.0))
      throw std::invalid_argument("IonizationModel: k_ion must be >= 0");
    if (!(repump_success >= 0.0 && repump_success <= 1.0))
      throw std::invalid_argument(
          "IonizationModel: repump_success must be in [0, 1]");
  }
};

enum class ChargeState { Negative, Ionized };

// Current spectral position (rad/ns, relative to nominal resonance) and
// charge state. Ionized implies zero fluorescence downstream.
struct EnvironmentState {
  double delta_offset = 0.0;
  ChargeState charge = ChargeState::Negative;

  bool emitting() const { return charge == ChargeState::Negative; }
};

// Green repump: recharge with probability repump_success and redraw the
// spectral offset. The jump draw is consumed unconditionally so the offset
// sequence is independent of the charge history.
inline EnvironmentState apply_repump(const EnvironmentState& state,
                                     const SpectralModel& model,
                                     const IonizationModel& ion, Rng& rng) {
  EnvironmentState next = state;
  next.delta_offset = model.jump_fwhm_b > 0.0
                          ? rng.gaussian(model.center_offset, model.sigma())
                          : model.center_offset;
  if (ion.repump_success >= 1.0 || rng.bernoulli(ion.repump_success))
    next.charge = ChargeState::Negative;
  return next;
}

// Gamma = k_ion * P * rho_ee: ionization requires excited-state occupation
// plus a further photon.
inline double ionization_rate(double power_uw, double rho_ee_ss,
                              const IonizationModel& ion) {
  return ion.k_ion * power_uw * rho_ee_ss;
}

// Survival of one drive interval: flips to Ionized with probability
// 1 - exp(-rate*duration). Already-ionized states stay ionized; no draw is
// consumed when the flip is impossible.
inline EnvironmentState survive_interval(const EnvironmentState& state,
                                         double rate, double duration,
                                         Rng& rng) {
  if (!(rate >= 0.0))
    throw std::invalid_argument("survive_interval: rate must be >= 0");
  if (state.charge == ChargeState::Ionized || rate == 0.0 || duration <= 0.0)
    return state;
  EnvironmentState next = state;
  if (rng.uniform() < -std::expm1(-rate * duration))
    next.charge = ChargeState::Ionized;
  return next;
}

// NV1 jumps over twice the range of NV2; NV2 uses the FWHM of the
// transient simulations. Modeling choice, the exact widths are not pinned
// by measurement.
inline SpectralModel nv2_preset() { return SpectralModel{mhz_to_rad_ns(40.0), 0.0}; }
inline SpectralModel nv1_preset() { return SpectralModel{mhz_to_rad_ns(80.0), 0.0}; }

}  // namespace nvsim
