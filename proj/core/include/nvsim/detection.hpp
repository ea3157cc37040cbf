#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nvsim/bloch.hpp"
#include "nvsim/emitter.hpp"
#include "nvsim/environment.hpp"
#include "nvsim/pulse.hpp"
#include "nvsim/rng.hpp"

// Photon detection: excited-state trajectories are converted to expected
// sideband counts per time bin (rate eta*gamma1*rho_ee plus dark counts),
// optionally Poisson-sampled for shot-noise realism.

namespace nvsim {

struct DetectorModel {
  double bin_width = 0.256;   // ns
  double efficiency_eta = 8.7e-4;
  double dark_rate = 2e-7;    // counts/ns (200 Hz)

  void validate() const {
    if (!(bin_width > 0.0))
      throw std::invalid_argument("DetectorModel: bin_width must be > 0");
    if (!(efficiency_eta >= 0.0 && efficiency_eta <= 1.0))
      throw std::invalid_argument(
          "DetectorModel: efficiency_eta must be in [0, 1]");
    if (!(dark_rate >= 0.0))
      throw std::invalid_argument("DetectorModel: dark_rate must be >= 0");
  }
};

// Binned counts versus time since pulse start. Counts are expected values
// (reals) or Poisson samples (integer-valued reals). Merging sums counts
// bin-by-bin and accumulates n_cycles.
struct TimeHistogram {
  std::vector<double> bin_edges;  // size bins+1, ns
  std::vector<double> counts;     // size bins
  std::uint64_t n_cycles = 0;

  std::size_t bins() const { return counts.size(); }
  double bin_start(std::size_t i) const { return bin_edges[i]; }

  TimeHistogram& merge(const TimeHistogram& other);
  TimeHistogram& add_scaled(const TimeHistogram& other, double scale);
  double total() const;
};

TimeHistogram make_histogram(double span, double bin_width);

// Photon counts collected during one probe interval.
struct ProbeResult {
  std::uint64_t n_probe = 0;
};

// counts[i] = eta * gamma1 * integral of rho_ee over bin (trapezoid on the
// trajectory grid) + dark_rate * bin_width, for one excitation cycle.
// The trajectory must cover the histogram span.
TimeHistogram expected_counts(const Trajectory& traj, const DetectorModel& det,
                              double gamma1);

// Independent Poisson draw per bin with the expected mean.
TimeHistogram sample_counts(const TimeHistogram& expected, Rng& rng);

// Mean probe-signal rate (counts/ns) at the given spectral offset. Ionized
// emitters contribute dark counts only.
double probe_mean_rate(double delta_offset, double probe_omega,
                       const RateSet& rates, const DetectorModel& det);

// One Poisson draw of the probe counter:
// mean = [eta*gamma1*steady_state(Omega_probe, delta) + dark] * duration.
ProbeResult probe_counts(double delta_offset, const PulseProgram& program,
                         const EmitterParams& emitter, const DetectorModel& det,
                         Rng& rng);

}  // namespace nvsim
