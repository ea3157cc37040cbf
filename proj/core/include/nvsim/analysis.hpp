#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nvsim/detection.hpp"
#include "nvsim/least_squares.hpp"

// Nonlinear least-squares extraction of the physical observables: damped
// cosine (Rabi transients), exponential decay (lifetime, ionization),
// Lorentzian (excitation scans), sqrt-power law (Rabi frequency vs power)
// and scan alignment for separating spectral jumps from the intrinsic line.

namespace nvsim {

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitOptions {
  bool poisson_weights = false;  // weight residuals by 1/sqrt(max(count,1))
  LeastSquaresOptions solver;
};

// A*cos(omega*(t-t0))*exp(-(t-t0)/tau) + C; amplitude is referenced at t0.
struct DampedCosineFit {
  double omega = 0.0;      // rad/ns
  double tau = 0.0;        // ns
  double t0 = 0.0;         // ns
  double amplitude = 0.0;
  double offset = 0.0;
  double omega_stderr = 0.0;
  double tau_stderr = 0.0;
  double amplitude_stderr = 0.0;
  bool converged = false;

  // oscillation envelope extrapolated to time t
  double amplitude_at(double t) const;
};

struct ExpDecayFit {
  double rate = 0.0;  // 1/ns
  double amplitude = 0.0;
  double baseline = 0.0;
  double rate_stderr = 0.0;
  bool converged = false;
};

struct LorentzianFit {
  double center = 0.0;  // x units of the scan
  double fwhm = 0.0;
  double height = 0.0;
  double baseline = 0.0;
  double center_stderr = 0.0;
  double fwhm_stderr = 0.0;
  bool converged = false;
  bool edge_peak = false;  // maximum sat on a scan boundary
};

struct SqrtLawFit {
  double kappa = 0.0;  // slope of omega vs sqrt(P)
  double kappa_stderr = 0.0;
  double r_squared = 0.0;
};

// Least squares of A*cos(Omega(t-t0))*exp(-(t-t0)/tau)+C over the window
// [t_start, t_end] (bin centers). Initial Omega comes from the peak of the
// discrete spectrum of the mean-subtracted window (ties broken toward lower
// frequency), initial tau from the amplitude decay between window halves.
// Throws FitError when no spectral peak rises above the noise floor.
DampedCosineFit fit_damped_cosine(const TimeHistogram& hist, double t_start,
                                  double t_end, const FitOptions& opts = {});

// Same, for an arbitrary sampled trace.
DampedCosineFit fit_damped_cosine(const std::vector<double>& t,
                                  const std::vector<double>& y,
                                  double t_start, double t_end,
                                  const FitOptions& opts = {});

// A*exp(-rate*t) + C on [t_start, t_end]. A constant trace returns
// rate = 0 with the baseline at that constant; a rising trace throws.
ExpDecayFit fit_exponential(const std::vector<double>& t,
                            const std::vector<double>& y, double t_start,
                            double t_end, const FitOptions& opts = {});

ExpDecayFit fit_exponential(const TimeHistogram& hist, double t_start,
                            double t_end, const FitOptions& opts = {});

// h / (1 + ((x-x0)/(fwhm/2))^2) + baseline. Initial center at the maximum
// bin, initial width from the half-maximum crossings. A flat scan throws;
// a maximum on the boundary sets edge_peak and still fits.
LorentzianFit fit_lorentzian(const std::vector<double>& x,
                             const std::vector<double>& y,
                             const FitOptions& opts = {});

// omega = kappa*sqrt(P) through the origin; R^2 about the mean as the
// linearity diagnostic. Needs at least two points.
SqrtLawFit fit_sqrt_law(const std::vector<std::pair<double, double>>& points);

// One frequency scan: x values (any fixed unit) and counts.
struct FrequencyScan {
  std::vector<double> x;
  std::vector<double> counts;
};

struct AlignedScans {
  std::vector<double> centers;  // fitted center per included scan
  FrequencyScan summed;         // center-shifted sum, normalized to unit area
  FrequencyScan summed_unshifted;
  std::size_t n_excluded = 0;
};

// Fit each scan's Lorentzian center, shift scans to a common center on the
// shared grid (linear interpolation) and sum; scans whose center fit fails
// are excluded and counted.
AlignedScans align_and_sum_scans(const std::vector<FrequencyScan>& scans);

// mean and standard deviation helpers used across the analysis suite
double mean_of(const std::vector<double>& v);
double stddev_of(const std::vector<double>& v);

}  // namespace nvsim
