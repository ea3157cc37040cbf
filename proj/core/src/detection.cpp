#include "nvsim/detection.hpp"

#include <cmath>

namespace nvsim {

TimeHistogram& TimeHistogram::merge(const TimeHistogram& other) {
  return add_scaled(other, 1.0);
}

TimeHistogram& TimeHistogram::add_scaled(const TimeHistogram& other,
                                         double scale) {
  if (bin_edges.empty()) {
    bin_edges = other.bin_edges;
    counts.assign(other.counts.size(), 0.0);
  }
  if (counts.size() != other.counts.size())
    throw std::invalid_argument("TimeHistogram: merge of mismatched grids");
  for (std::size_t i = 0; i < counts.size(); ++i)
    counts[i] += scale * other.counts[i];
  n_cycles += other.n_cycles;
  return *this;
}

double TimeHistogram::total() const {
  double s = 0.0;
  for (double c : counts) s += c;
  return s;
}

TimeHistogram make_histogram(double span, double bin_width) {
  const auto n = static_cast<std::size_t>(std::floor(span / bin_width + 1e-9));
  if (n == 0)
    throw std::invalid_argument("make_histogram: span shorter than one bin");
  TimeHistogram h;
  h.bin_edges.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    h.bin_edges[i] = bin_width * static_cast<double>(i);
  h.counts.assign(n, 0.0);
  return h;
}

TimeHistogram expected_counts(const Trajectory& traj, const DetectorModel& det,
                              double gamma1) {
  det.validate();
  const double span = traj.t_grid.back() - traj.t_grid.front();
  TimeHistogram hist = make_histogram(span, det.bin_width);
  if (traj.t_grid.back() < hist.bin_edges.back() - 1e-9)
    throw std::invalid_argument(
        "expected_counts: trajectory shorter than histogram span");

  // Trapezoid on the trajectory grid; grid points are accumulated into the
  // bin containing the midpoint of each grid interval.
  const double t0 = traj.t_grid.front();
  const double dark = det.dark_rate * det.bin_width;
  std::size_t bin = 0;
  for (std::size_t i = 1; i < traj.t_grid.size(); ++i) {
    const double seg =
        0.5 * (traj.rho_ee[i - 1] + traj.rho_ee[i]) *
        (traj.t_grid[i] - traj.t_grid[i - 1]);
    const double mid =
        0.5 * (traj.t_grid[i - 1] + traj.t_grid[i]) - t0;
    while (bin + 1 < hist.bins() && mid >= hist.bin_edges[bin + 1]) ++bin;
    if (mid >= hist.bin_edges[bin] && mid < hist.bin_edges[bin + 1])
      hist.counts[bin] += seg;
  }
  for (double& c : hist.counts)
    c = det.efficiency_eta * gamma1 * c + dark;
  hist.n_cycles = 1;
  return hist;
}

TimeHistogram sample_counts(const TimeHistogram& expected, Rng& rng) {
  TimeHistogram out = expected;
  for (double& c : out.counts) {
    if (!(c >= 0.0) || !std::isfinite(c))
      throw std::invalid_argument("sample_counts: expected counts not finite");
    c = static_cast<double>(rng.poisson(c));
  }
  return out;
}

double probe_mean_rate(double delta_offset, double probe_omega,
                       const RateSet& rates, const DetectorModel& det) {
  return det.efficiency_eta * rates.gamma1 *
             steady_state(probe_omega, delta_offset, rates) +
         det.dark_rate;
}

ProbeResult probe_counts(double delta_offset, const PulseProgram& program,
                         const EmitterParams& emitter, const DetectorModel& det,
                         Rng& rng) {
  if (!(program.probe_duration > 0.0))
    throw std::invalid_argument("probe_counts: probe_duration must be > 0");
  const RateSet rates = derive_rates(emitter);
  const double omega_probe = power_to_rabi(program.probe_power, emitter.kappa);
  const double mean =
      probe_mean_rate(delta_offset, omega_probe, rates, det) *
      program.probe_duration;
  return ProbeResult{rng.poisson(mean)};
}

}  // namespace nvsim
