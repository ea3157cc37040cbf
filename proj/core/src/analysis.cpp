#include "nvsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "nvsim/units.hpp"

namespace nvsim {

namespace {

struct Window {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> w;  // residual weights
};

Window extract_window(const std::vector<double>& t,
                      const std::vector<double>& y, double t_start,
                      double t_end, bool poisson_weights) {
  Window win;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_start || t[i] > t_end) continue;
    win.t.push_back(t[i]);
    win.y.push_back(y[i]);
    win.w.push_back(poisson_weights
                        ? 1.0 / std::sqrt(std::max(y[i], 1.0))
                        : 1.0);
  }
  return win;
}

std::vector<double> bin_centers(const TimeHistogram& hist) {
  std::vector<double> c(hist.bins());
  for (std::size_t i = 0; i < hist.bins(); ++i)
    c[i] = 0.5 * (hist.bin_edges[i] + hist.bin_edges[i + 1]);
  return c;
}

// Discrete spectrum of the mean-subtracted window on a fixed frequency
// grid. Returns peak angular frequency, its complex value and the peak to
// band-median power ratio. Ties go to the lower frequency.
struct SpectralPeak {
  double omega = 0.0;
  std::complex<double> value;
  double prominence = 0.0;
};

SpectralPeak spectral_peak(const Window& win) {
  const double t_span = win.t.back() - win.t.front();
  const double dt = (win.t.back() - win.t.front()) /
                    static_cast<double>(win.t.size() - 1);
  // at least ~1.75 periods must fit in the window; stop short of Nyquist
  const double om_lo = 1.75 * kTwoPi / t_span;
  const double om_hi = 0.8 * std::numbers::pi / dt;
  const int n_grid = 1200;

  const double mean =
      std::accumulate(win.y.begin(), win.y.end(), 0.0) / win.y.size();
  std::vector<double> power(n_grid);
  SpectralPeak peak;
  std::vector<std::complex<double>> zvals(n_grid);
  for (int g = 0; g < n_grid; ++g) {
    const double om = om_lo + (om_hi - om_lo) * g / (n_grid - 1);
    std::complex<double> z = 0.0;
    for (std::size_t i = 0; i < win.t.size(); ++i)
      z += (win.y[i] - mean) *
           std::exp(std::complex<double>(0.0, -om * win.t[i]));
    zvals[g] = z;
    power[g] = std::norm(z);
  }
  int best = 0;
  for (int g = 1; g < n_grid; ++g)
    if (power[g] > power[best]) best = g;  // strict: ties stay low
  std::vector<double> sorted = power;
  std::nth_element(sorted.begin(), sorted.begin() + n_grid / 2, sorted.end());
  const double median = std::max(sorted[n_grid / 2], 1e-300);

  peak.omega = om_lo + (om_hi - om_lo) * best / (n_grid - 1);
  peak.value = zvals[best];
  peak.prominence = power[best] / median;
  return peak;
}

}  // namespace

double DampedCosineFit::amplitude_at(double t) const {
  return amplitude * std::exp(-(t - t0) / tau);
}

DampedCosineFit fit_damped_cosine(const std::vector<double>& t,
                                  const std::vector<double>& y,
                                  double t_start, double t_end,
                                  const FitOptions& opts) {
  Window win = extract_window(t, y, t_start, t_end, opts.poisson_weights);
  if (win.t.size() < 20)
    throw FitError("fit_damped_cosine: window has fewer than 20 bins");

  const SpectralPeak peak = spectral_peak(win);
  if (peak.prominence < 10.0)
    throw FitError("fit_damped_cosine: no oscillation above noise floor");

  // initial phase: t0 such that cos aligns at the peak frequency
  const double om0 = peak.omega;
  double t00 = std::arg(peak.value) / om0;
  const double period = kTwoPi / om0;
  while (t00 < win.t.front() - 0.5 * period) t00 += period;
  while (t00 > win.t.front() + 0.5 * period) t00 -= period;

  const double mean =
      std::accumulate(win.y.begin(), win.y.end(), 0.0) / win.y.size();
  double a0;
  {
    double ssq = 0.0;
    for (double v : win.y) ssq += (v - mean) * (v - mean);
    a0 = std::sqrt(2.0 * ssq / win.y.size());
  }
  // decay guess from rms amplitude of the two window halves
  double tau0;
  {
    const std::size_t h = win.y.size() / 2;
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < h; ++i) s1 += std::pow(win.y[i] - mean, 2);
    for (std::size_t i = h; i < win.y.size(); ++i)
      s2 += std::pow(win.y[i] - mean, 2);
    const double a1 = std::sqrt(s1 / h);
    const double a2 = std::sqrt(s2 / (win.y.size() - h));
    const double span = win.t[h] - win.t.front();
    tau0 = span / std::log(std::max(a1 / std::max(a2, 1e-12), 1.05));
    tau0 = std::clamp(tau0, 0.3, 10.0 * (t_end - t_start));
  }

  const std::size_t n = win.t.size();
  const auto residuals = [&](std::span<const double> p,
                             std::span<double> r) -> bool {
    const double A = p[0], om = p[1], t0 = p[2], tau = p[3], C = p[4];
    if (!(tau > 1e-3) || !(om > 0.0)) return false;
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = win.t[i] - t0;
      const double model =
          A * std::cos(om * arg) * std::exp(-arg / tau) + C;
      r[i] = (model - win.y[i]) * win.w[i];
    }
    return true;
  };

  LeastSquaresResult ls = fit_least_squares(
      residuals, {a0, om0, t00, tau0, mean}, n, opts.solver);

  DampedCosineFit fit;
  fit.amplitude = ls.params[0];
  fit.omega = ls.params[1];
  fit.t0 = ls.params[2];
  fit.tau = ls.params[3];
  fit.offset = ls.params[4];
  fit.amplitude_stderr = ls.stderrs[0];
  fit.omega_stderr = ls.stderrs[1];
  fit.tau_stderr = ls.stderrs[3];
  fit.converged = ls.converged && fit.tau > 0.0;
  if (fit.amplitude < 0.0) {  // fold the sign into a half-period phase shift
    fit.amplitude = -fit.amplitude;
    fit.t0 += 0.5 * kTwoPi / fit.omega;
  }
  if (fit.omega < 0.0) fit.omega = -fit.omega;
  return fit;
}

DampedCosineFit fit_damped_cosine(const TimeHistogram& hist, double t_start,
                                  double t_end, const FitOptions& opts) {
  return fit_damped_cosine(bin_centers(hist), hist.counts, t_start, t_end,
                           opts);
}

ExpDecayFit fit_exponential(const std::vector<double>& t,
                            const std::vector<double>& y, double t_start,
                            double t_end, const FitOptions& opts) {
  Window win = extract_window(t, y, t_start, t_end, opts.poisson_weights);
  if (win.t.size() < 4)
    throw FitError("fit_exponential: window has fewer than 4 points");

  const auto [mn_it, mx_it] = std::minmax_element(win.y.begin(), win.y.end());
  if (*mx_it == *mn_it) {
    ExpDecayFit fit;
    fit.rate = 0.0;
    fit.amplitude = 0.0;
    fit.baseline = *mn_it;
    fit.converged = true;
    return fit;
  }
  const std::size_t n = win.t.size();
  const std::size_t tail = std::max<std::size_t>(n / 10, 2);
  double head = 0.0, rear = 0.0;
  for (std::size_t i = 0; i < tail; ++i) head += win.y[i];
  for (std::size_t i = n - tail; i < n; ++i) rear += win.y[i];
  head /= tail;
  rear /= tail;
  if (head <= rear)
    throw FitError("fit_exponential: non-positive dynamic range");

  // log-linear regression on the baseline-subtracted head for the rate seed
  double c0 = rear;
  double a0 = head - c0;
  double rate0;
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = win.y[i] - c0;
      if (v <= a0 * 1e-3) continue;
      const double ly = std::log(v);
      sx += win.t[i];
      sy += ly;
      sxx += win.t[i] * win.t[i];
      sxy += win.t[i] * ly;
      ++m;
    }
    const double denom = m * sxx - sx * sx;
    rate0 = (m >= 2 && denom > 0.0) ? -(m * sxy - sx * sy) / denom : 0.1;
    if (!(rate0 > 0.0)) rate0 = 1.0 / (win.t.back() - win.t.front());
  }

  const auto residuals = [&](std::span<const double> p,
                             std::span<double> r) -> bool {
    const double A = p[0], rate = p[1], C = p[2];
    if (!(rate >= 0.0)) return false;
    for (std::size_t i = 0; i < n; ++i)
      r[i] = (A * std::exp(-rate * win.t[i]) + C - win.y[i]) * win.w[i];
    return true;
  };
  // seed the amplitude consistently with the rate at the window start
  a0 = (head - c0) * std::exp(rate0 * win.t.front());

  LeastSquaresResult ls =
      fit_least_squares(residuals, {a0, rate0, c0}, n, opts.solver);
  ExpDecayFit fit;
  fit.amplitude = ls.params[0];
  fit.rate = ls.params[1];
  fit.baseline = ls.params[2];
  fit.rate_stderr = ls.stderrs[1];
  fit.converged = ls.converged && fit.rate >= 0.0;
  return fit;
}

ExpDecayFit fit_exponential(const TimeHistogram& hist, double t_start,
                            double t_end, const FitOptions& opts) {
  return fit_exponential(bin_centers(hist), hist.counts, t_start, t_end,
                         opts);
}

LorentzianFit fit_lorentzian(const std::vector<double>& x,
                             const std::vector<double>& y,
                             const FitOptions& opts) {
  if (x.size() != y.size() || x.size() < 5)
    throw FitError("fit_lorentzian: need at least 5 scan points");
  const auto [mn_it, mx_it] = std::minmax_element(y.begin(), y.end());
  if (*mx_it - *mn_it <= 0.0)
    throw FitError("fit_lorentzian: flat scan");

  std::size_t imax = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[imax]) imax = i;  // ties keep the lower x

  const bool edge = (imax == 0) || (imax == y.size() - 1);
  const double baseline0 = *mn_it;
  const double height0 = y[imax] - baseline0;
  const double half = baseline0 + 0.5 * height0;
  // half-maximum crossings around the peak
  double x_lo = x.front(), x_hi = x.back();
  for (std::size_t i = imax; i-- > 0;)
    if (y[i] < half) {
      x_lo = x[i];
      break;
    }
  for (std::size_t i = imax + 1; i < y.size(); ++i)
    if (y[i] < half) {
      x_hi = x[i];
      break;
    }
  double fwhm0 = x_hi - x_lo;
  if (!(fwhm0 > 0.0)) fwhm0 = (x.back() - x.front()) / 10.0;

  const std::size_t n = x.size();
  std::vector<double> wts(n, 1.0);
  if (opts.poisson_weights)
    for (std::size_t i = 0; i < n; ++i)
      wts[i] = 1.0 / std::sqrt(std::max(y[i], 1.0));
  const auto residuals = [&](std::span<const double> p,
                             std::span<double> r) -> bool {
    const double h = p[0], x0 = p[1], fw = p[2], c = p[3];
    if (!(fw > 0.0)) return false;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (x[i] - x0) / (0.5 * fw);
      r[i] = (h / (1.0 + u * u) + c - y[i]) * wts[i];
    }
    return true;
  };
  LeastSquaresResult ls = fit_least_squares(
      residuals, {height0, x[imax], fwhm0, baseline0}, n, opts.solver);

  LorentzianFit fit;
  fit.height = ls.params[0];
  fit.center = ls.params[1];
  fit.fwhm = std::abs(ls.params[2]);
  fit.baseline = ls.params[3];
  fit.center_stderr = ls.stderrs[1];
  fit.fwhm_stderr = ls.stderrs[2];
  fit.converged = ls.converged;
  fit.edge_peak = edge;
  return fit;
}

SqrtLawFit fit_sqrt_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2)
    throw FitError("fit_sqrt_law: need at least 2 points");
  double sxx = 0.0, sxy = 0.0, sy = 0.0;
  for (const auto& [p, om] : points) {
    const double rx = std::sqrt(p);
    sxx += rx * rx;
    sxy += rx * om;
    sy += om;
  }
  if (sxx == 0.0) throw FitError("fit_sqrt_law: all powers are zero");
  SqrtLawFit fit;
  fit.kappa = sxy / sxx;
  const double ybar = sy / points.size();
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& [p, om] : points) {
    const double r = om - fit.kappa * std::sqrt(p);
    ss_res += r * r;
    ss_tot += (om - ybar) * (om - ybar);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  if (points.size() > 1 && sxx > 0.0)
    fit.kappa_stderr =
        std::sqrt(std::max(ss_res, 0.0) / (points.size() - 1) / sxx);
  return fit;
}

AlignedScans align_and_sum_scans(const std::vector<FrequencyScan>& scans) {
  if (scans.empty())
    throw FitError("align_and_sum_scans: no scans");
  const std::vector<double>& grid = scans.front().x;

  AlignedScans out;
  out.summed.x = grid;
  out.summed.counts.assign(grid.size(), 0.0);
  out.summed_unshifted.x = grid;
  out.summed_unshifted.counts.assign(grid.size(), 0.0);

  std::vector<std::pair<const FrequencyScan*, double>> included;
  double center_sum = 0.0;
  for (const auto& scan : scans) {
    if (scan.x.size() != grid.size())
      throw FitError("align_and_sum_scans: scans must share one grid");
    try {
      const LorentzianFit f = fit_lorentzian(scan.x, scan.counts);
      if (!f.converged) throw FitError("center fit did not converge");
      out.centers.push_back(f.center);
      included.emplace_back(&scan, f.center);
      center_sum += f.center;
    } catch (const FitError&) {
      ++out.n_excluded;
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
      out.summed_unshifted.counts[i] += scan.counts[i];
  }
  if (included.empty())
    throw FitError("align_and_sum_scans: every center fit failed");

  const double common_center = center_sum / included.size();
  for (const auto& [scan, center] : included) {
    const double shift = center - common_center;
    // sample the scan at grid + shift (move the line to the common center)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double xs = grid[i] + shift;
      if (xs < grid.front() || xs > grid.back()) continue;
      const auto it =
          std::upper_bound(grid.begin(), grid.end(), xs) - grid.begin();
      const std::size_t hi = std::min<std::size_t>(it, grid.size() - 1);
      const std::size_t lo = hi == 0 ? 0 : hi - 1;
      double v;
      if (hi == lo) {
        v = scan->counts[lo];
      } else {
        const double f = (xs - grid[lo]) / (grid[hi] - grid[lo]);
        v = scan->counts[lo] * (1.0 - f) + scan->counts[hi] * f;
      }
      out.summed.counts[i] += v;
    }
  }

  // normalize both sums to unit area
  const auto normalize = [&](FrequencyScan& s) {
    double area = 0.0;
    for (std::size_t i = 1; i < s.x.size(); ++i)
      area += 0.5 * (s.counts[i - 1] + s.counts[i]) * (s.x[i] - s.x[i - 1]);
    if (area > 0.0)
      for (double& c : s.counts) c /= area;
  };
  normalize(out.summed);
  normalize(out.summed_unshifted);
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

}  // namespace nvsim
