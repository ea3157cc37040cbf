#include "nvsim/least_squares.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace nvsim {

bool solve_dense(std::vector<double>& a, std::vector<double>& b,
                 std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (a[pivot * n + col] == 0.0) return false;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c)
        std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
    b[r] = s / (a[r * n + r]);
  }
  return true;
}

namespace {

double chi2_of(const std::vector<double>& res) {
  double s = 0.0;
  for (double r : res) s += r * r;
  return s;
}

// central differences, relative step with absolute floor
void numerical_jacobian(const ResidualFn& f, const std::vector<double>& p,
                        double rel_step, std::size_t n_res,
                        std::vector<double>& jac,
                        std::vector<double>& scratch_lo,
                        std::vector<double>& scratch_hi) {
  const std::size_t np = p.size();
  std::vector<double> pp = p;
  for (std::size_t j = 0; j < np; ++j) {
    const double step = rel_step * std::max(std::abs(p[j]), 1e-12);
    pp[j] = p[j] + step;
    const bool ok_hi = f(pp, scratch_hi);
    pp[j] = p[j] - step;
    const bool ok_lo = f(pp, scratch_lo);
    pp[j] = p[j];
    if (!ok_hi || !ok_lo)
      throw std::runtime_error("least_squares: model domain error in Jacobian");
    const double inv = 1.0 / (2.0 * step);
    for (std::size_t i = 0; i < n_res; ++i)
      jac[i * np + j] = (scratch_hi[i] - scratch_lo[i]) * inv;
  }
}

}  // namespace

LeastSquaresResult fit_least_squares(const ResidualFn& residuals,
                                     std::vector<double> initial,
                                     std::size_t n_residuals,
                                     const LeastSquaresOptions& options) {
  const std::size_t np = initial.size();
  if (n_residuals < np)
    throw std::invalid_argument("least_squares: fewer residuals than params");

  std::vector<double> res(n_residuals), res_try(n_residuals);
  std::vector<double> jac(n_residuals * np);
  std::vector<double> lo(n_residuals), hi(n_residuals);

  LeastSquaresResult out;
  out.params = initial;
  if (!residuals(out.params, res))
    throw std::invalid_argument("least_squares: initial params out of domain");
  double chi2 = chi2_of(res);

  double lambda = options.initial_lambda;
  std::vector<double> jtj(np * np), jtr(np), a(np * np), step(np);
  std::vector<double> trial(np);

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    numerical_jacobian(residuals, out.params, options.jacobian_rel_step,
                       n_residuals, jac, lo, hi);
    for (std::size_t r = 0; r < np; ++r) {
      jtr[r] = 0.0;
      for (std::size_t c = 0; c < np; ++c) jtj[r * np + c] = 0.0;
    }
    for (std::size_t i = 0; i < n_residuals; ++i) {
      for (std::size_t r = 0; r < np; ++r) {
        const double jir = jac[i * np + r];
        jtr[r] += jir * res[i];
        for (std::size_t c = r; c < np; ++c)
          jtj[r * np + c] += jir * jac[i * np + c];
      }
    }
    for (std::size_t r = 0; r < np; ++r)
      for (std::size_t c = 0; c < r; ++c) jtj[r * np + c] = jtj[c * np + r];

    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      a = jtj;
      for (std::size_t d = 0; d < np; ++d)
        a[d * np + d] += lambda * std::max(jtj[d * np + d], 1e-12);
      step = jtr;
      if (!solve_dense(a, step, np)) {
        lambda *= 10.0;
        continue;
      }
      for (std::size_t j = 0; j < np; ++j)
        trial[j] = out.params[j] - step[j];
      if (!residuals(trial, res_try)) {
        lambda *= 10.0;
        continue;
      }
      const double chi2_try = chi2_of(res_try);
      if (chi2_try <= chi2) {
        double max_rel = 0.0;
        for (std::size_t j = 0; j < np; ++j)
          max_rel = std::max(max_rel,
                             std::abs(step[j]) /
                                 std::max(std::abs(out.params[j]), 1e-12));
        out.params = trial;
        res = res_try;
        chi2 = chi2_try;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (max_rel < options.relative_tol) {
          out.converged = true;
        }
      } else {
        lambda *= 10.0;
      }
    }
    if (out.converged || !accepted) break;
  }
  // a failed line search on a still-valid iterate counts as stalled
  // convergence when the gradient step has collapsed
  out.iterations = iter + 1;
  out.chi2 = chi2;

  // standard errors from the unscaled normal equations
  out.stderrs.assign(np, 0.0);
  if (n_residuals > np) {
    const double variance = chi2 / static_cast<double>(n_residuals - np);
    // invert jtj column by column
    std::vector<double> inv_col(np);
    bool ok = true;
    std::vector<double> jtj_copy;
    for (std::size_t c = 0; c < np && ok; ++c) {
      jtj_copy = jtj;
      inv_col.assign(np, 0.0);
      inv_col[c] = 1.0;
      ok = solve_dense(jtj_copy, inv_col, np);
      if (ok && inv_col[c] > 0.0)
        out.stderrs[c] = std::sqrt(variance * inv_col[c]);
    }
  }
  return out;
}

}  // namespace nvsim
