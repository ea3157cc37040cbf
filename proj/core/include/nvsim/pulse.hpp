#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

// Drive-pulse timing and envelope shaping. Rise and fall are modeled as
// single-exponential charging/discharging with the time constant chosen so
// the 10-90% transit equals the quoted rise/fall time (tau = t_rise / ln 9).

namespace nvsim {

// Timing and power of one excitation cycle: green repump, then
// `repetitions_per_repump` resonant pulses of `drive_duration` separated by
// `off_duration`, optionally preceded by a weak probe pulse (probe_duration
// is 0 when the probe stage is absent). All times ns, powers uW.
struct PulseProgram {
  double green_duration = 10000.0;
  double drive_duration = 30.0;
  double off_duration = 70.0;
  long repetitions_per_repump = 1000;
  double rise_time = 1.3;
  double fall_time = 1.3;
  double probe_duration = 0.0;
  double power = 38.0;
  double probe_power = 0.00766;

  void validate() const {
    if (!(green_duration >= 0) || !(drive_duration >= 0) ||
        !(off_duration >= 0) || !(rise_time >= 0) || !(fall_time >= 0) ||
        !(probe_duration >= 0))
      throw std::invalid_argument("PulseProgram: durations must be >= 0");
    if (repetitions_per_repump < 1)
      throw std::invalid_argument(
          "PulseProgram: repetitions_per_repump must be >= 1");
    if (!(drive_duration > rise_time))
      throw std::invalid_argument(
          "PulseProgram: drive_duration must exceed rise_time");
    if (!(power >= 0) || !(probe_power >= 0))
      throw std::invalid_argument("PulseProgram: powers must be >= 0");
  }
};

// Amplitude fraction of the drive field versus time since pulse start,
// in [0, 1]. Immutable once built.
class Envelope {
 public:
  Envelope(double drive_duration, double rise_time, double fall_time)
      : t_off_(drive_duration),
        tau_rise_(rise_time > 0 ? rise_time / std::log(9.0) : 0.0),
        tau_fall_(fall_time > 0 ? fall_time / std::log(9.0) : 0.0) {}

  double operator()(double t) const {
    if (t < 0.0) return 0.0;
    if (t <= t_off_) {
      if (tau_rise_ == 0.0) return 1.0;
      return 1.0 - std::exp(-t / tau_rise_);
    }
    if (tau_fall_ == 0.0) return 0.0;
    return plateau_value() * std::exp(-(t - t_off_) / tau_fall_);
  }

  double drive_off_time() const { return t_off_; }

  // time at which the rising edge has reached 99% of the plateau
  double rise_end_time() const {
    return tau_rise_ == 0.0 ? 0.0 : tau_rise_ * std::log(100.0);
  }

 private:
  double plateau_value() const {
    if (tau_rise_ == 0.0) return 1.0;
    return 1.0 - std::exp(-t_off_ / tau_rise_);
  }
  double t_off_;
  double tau_rise_;
  double tau_fall_;
};

inline Envelope make_envelope(const PulseProgram& program) {
  program.validate();
  return Envelope(program.drive_duration, program.rise_time,
                  program.fall_time);
}

// Omega0 = kappa * sqrt(P)
inline double power_to_rabi(double power_uw, double kappa) {
  if (!(power_uw >= 0.0))
    throw std::invalid_argument("power_to_rabi: power must be >= 0");
  return kappa * std::sqrt(power_uw);
}

inline double pi_pulse_duration(double omega0) {
  if (!(omega0 > 0.0))
    throw std::invalid_argument("pi_pulse_duration: omega0 must be > 0");
  return std::numbers::pi / omega0;
}

}  // namespace nvsim
