#include "nvsim/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nvsim {

namespace {

constexpr double kDefaultStep = 0.016;  // 16 ps

template <typename Drive>
BlochState rk4_step(const BlochState& s, double t, double h,
                    const Drive& drive, double delta, const RateSet& r) {
  const auto f = [&](const BlochState& y, double omega) {
    return bloch_derivative(y, DriveSample{omega, delta}, r);
  };
  const double om1 = drive(t);
  const double om2 = drive(t + 0.5 * h);
  const double om4 = drive(t + h);

  const BlochState k1 = f(s, om1);
  const BlochState k2 = f({s.u + 0.5 * h * k1.u, s.v + 0.5 * h * k1.v,
                           s.w + 0.5 * h * k1.w},
                          om2);
  const BlochState k3 = f({s.u + 0.5 * h * k2.u, s.v + 0.5 * h * k2.v,
                           s.w + 0.5 * h * k2.w},
                          om2);
  const BlochState k4 = f({s.u + h * k3.u, s.v + h * k3.v, s.w + h * k3.w},
                          om4);
  return BlochState{
      s.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
      s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
      s.w + h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w),
  };
}

template <typename Drive>
Trajectory integrate_impl(const RateSet& rates, const Drive& drive,
                          double delta, const std::vector<double>& t_grid,
                          double step_hint, const BlochState& initial) {
  if (t_grid.size() < 2)
    throw std::invalid_argument("integrate: t_grid needs at least two points");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("integrate: t_grid must strictly increase");

  // Bound the fastest drive scale by sampling; envelopes are monotone on
  // each edge so a coarse scan is adequate.
  double omega_max = 0.0;
  {
    const double span = t_grid.back() - t_grid.front();
    for (int i = 0; i <= 256; ++i)
      omega_max =
          std::max(omega_max, drive(t_grid.front() + span * i / 256.0));
  }
  const double bound = max_rk4_step(omega_max, delta, rates);
  double h = std::min(kDefaultStep, bound);
  if (step_hint > 0.0) {
    if (step_hint > bound)
      throw std::invalid_argument(
          "integrate: explicit step exceeds 1/(10 max(Omega,|delta|,gamma2))");
    h = step_hint;
  }

  Trajectory traj;
  traj.t_grid = t_grid;
  traj.rho_ee.resize(t_grid.size());
  BlochState s = initial;
  traj.rho_ee[0] = s.rho_ee();
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double t0 = t_grid[i - 1];
    const double dt = t_grid[i] - t0;
    const auto n_sub = static_cast<std::size_t>(std::ceil(dt / h - 1e-12));
    const double hs = dt / static_cast<double>(n_sub);
    for (std::size_t k = 0; k < n_sub; ++k)
      s = rk4_step(s, t0 + hs * static_cast<double>(k), hs, drive, delta,
                   rates);
    traj.rho_ee[i] = s.rho_ee();
  }
  return traj;
}

}  // namespace

double max_rk4_step(double omega_max, double delta, const RateSet& rates) {
  const double w_max = std::max({omega_max, std::abs(delta), rates.gamma2});
  if (w_max <= 0.0) return kDefaultStep;
  return 1.0 / (10.0 * w_max);
}

Trajectory integrate(const RateSet& rates, const DriveFn& drive, double delta,
                     const std::vector<double>& t_grid, double step_hint,
                     const BlochState& initial) {
  return integrate_impl(rates, drive, delta, t_grid, step_hint, initial);
}

Trajectory integrate(const EmitterParams& params, const Envelope& envelope,
                     double omega0, double delta,
                     const std::vector<double>& t_grid, double step_hint) {
  const RateSet rates = derive_rates(params);
  const auto drive = [omega0, envelope](double t) {
    return omega0 * envelope(t);
  };
  return integrate_impl(rates, drive, delta, t_grid, step_hint, BlochState{});
}

std::vector<double> uniform_grid(double t_end, std::size_t n_steps) {
  std::vector<double> g(n_steps + 1);
  for (std::size_t i = 0; i <= n_steps; ++i)
    g[i] = t_end * static_cast<double>(i) / static_cast<double>(n_steps);
  return g;
}

}  // namespace nvsim
