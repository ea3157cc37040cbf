#pragma once

#include <numbers>

// Internal unit system: time in ns, angular frequency in rad/ns, optical
// power in uW. Config files and CSV columns quote ordinary frequency in MHz;
// the conversion factor is 2*pi*1e-3 (1 MHz = 2*pi*1e-3 rad/ns).

namespace nvsim {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double mhz_to_rad_ns(double f_mhz) { return kTwoPi * 1e-3 * f_mhz; }
constexpr double rad_ns_to_mhz(double w) { return w / (kTwoPi * 1e-3); }

constexpr double ms_to_ns(double t_ms) { return t_ms * 1e6; }
constexpr double us_to_ns(double t_us) { return t_us * 1e3; }

// counts per second -> counts per ns (detector dark rate)
constexpr double cps_to_per_ns(double r) { return r * 1e-9; }

}  // namespace nvsim
