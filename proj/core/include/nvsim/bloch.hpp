#pragma once

#include <functional>
#include <vector>

#include "nvsim/emitter.hpp"
#include "nvsim/pulse.hpp"

// Optical Bloch equations of the driven two-level system in the rotating
// frame,
//   du/dt =  delta*v - gamma2*u
//   dv/dt = -delta*u + Omega(t)*w - gamma2*v
//   dw/dt = -Omega(t)*v - gamma1*(w + 1)
// integrated with fixed-step classical RK4. The excited-state population is
// rho_ee = (w + 1)/2.

namespace nvsim {

// Coherence vector (u, v, w); ground state is (0, 0, -1).
struct BlochState {
  double u = 0.0;
  double v = 0.0;
  double w = -1.0;

  double rho_ee() const { return 0.5 * (w + 1.0); }
  double norm2() const { return u * u + v * v + w * w; }
};

// Instantaneous drive: Rabi amplitude Omega(t) >= 0 and laser detuning
// delta_L, both rad/ns.
struct DriveSample {
  double omega = 0.0;
  double delta = 0.0;
};

// Right-hand side of the Bloch equations. Pure function.
inline BlochState bloch_derivative(const BlochState& s, const DriveSample& d,
                                   const RateSet& r) {
  return BlochState{
      d.delta * s.v - r.gamma2 * s.u,
      -d.delta * s.u + d.omega * s.w - r.gamma2 * s.v,
      -d.omega * s.v - r.gamma1 * (s.w + 1.0),
  };
}

// Excited-state population sampled on a caller-provided time grid.
struct Trajectory {
  std::vector<double> t_grid;
  std::vector<double> rho_ee;
};

// Omega(t) of the drive, rad/ns.
using DriveFn = std::function<double(double)>;

// Maximum admissible RK4 step for the given dynamic scales, 1/(10 w_max).
double max_rk4_step(double omega_max, double delta, const RateSet& rates);

// Integrate from the ground state (or `initial`) across t_grid. Internal
// substeps subdivide each grid interval; `step_hint` <= 0 selects the
// automatic step min(16 ps, 1/(10 w_max)). An explicit step above the
// admissible bound throws.
Trajectory integrate(const RateSet& rates, const DriveFn& drive, double delta,
                     const std::vector<double>& t_grid,
                     double step_hint = 0.0,
                     const BlochState& initial = BlochState{});

// Convenience overload: rectangular-equivalent drive built from an Envelope
// scaled by omega0.
Trajectory integrate(const EmitterParams& params, const Envelope& envelope,
                     double omega0, double delta,
                     const std::vector<double>& t_grid,
                     double step_hint = 0.0);

// Uniform grid helper: n_steps+1 points covering [0, t_end].
std::vector<double> uniform_grid(double t_end, std::size_t n_steps);

}  // namespace nvsim
