#pragma once

#include <functional>
#include <span>
#include <vector>

// Small dense nonlinear least squares: Gauss-Newton with Levenberg-style
// adaptive damping of the normal equations, numerical Jacobians by central
// differences. Sized for the 3-5 parameter fits of the analysis suite.

namespace nvsim {

// Fills residuals (weighted, model minus data) for the given parameters.
// Returns false when the parameters are outside the model domain; the step
// is then rejected and damping increased.
using ResidualFn =
    std::function<bool(std::span<const double>, std::span<double>)>;

struct LeastSquaresOptions {
  int max_iterations = 200;
  double relative_tol = 1e-8;       // convergence on parameter change
  double jacobian_rel_step = 1e-6;  // central-difference relative step
  double initial_lambda = 1e-3;
};

struct LeastSquaresResult {
  std::vector<double> params;
  std::vector<double> stderrs;  // from chi2/(n-p) * inv(J^T J)
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
};

LeastSquaresResult fit_least_squares(const ResidualFn& residuals,
                                     std::vector<double> initial,
                                     std::size_t n_residuals,
                                     const LeastSquaresOptions& options = {});

// Gaussian elimination with partial pivoting; a is n x n row-major, b the
// right-hand side. Returns false on a singular system.
bool solve_dense(std::vector<double>& a, std::vector<double>& b,
                 std::size_t n);

}  // namespace nvsim
