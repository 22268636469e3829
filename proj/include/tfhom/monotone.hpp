#pragma once

// Nonlinear periodic systems of the form
//
//   F_i(u) = c u_i + s * G(y_i, shift + D-u_i, shift + D+u_i) - rhs_i = 0
//
// with G a monotone numerical Hamiltonian. Both the discounted cell problem
// (c = lambda, s = 1) and one implicit Caputo step (c = 1, s = tau) take
// this shape. For c > 0 the Jacobian is a strictly diagonally dominant
// M-matrix, so the solution is unique and order preserving in rhs.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tfhom/errors.hpp"
#include "tfhom/hamiltonian.hpp"

namespace tfhom {

/// Solve the cyclic tridiagonal system lower_i x_{i-1} + diag_i x_i +
/// upper_i x_{i+1} = rhs_i with indices taken mod n. Sherman-Morrison on
/// top of the Thomas algorithm; requires n >= 3.
inline std::vector<double> solve_cyclic_tridiagonal(std::span<const double> lower,
                                                    std::span<const double> diag,
                                                    std::span<const double> upper,
                                                    std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n < 3 || lower.size() != n || upper.size() != n || rhs.size() != n)
    throw ShapeError("cyclic tridiagonal: inconsistent sizes");
  const double corner_top = lower[0];       // A(0, n-1)
  const double corner_bottom = upper[n - 1];  // A(n-1, 0)
  const double gam = -diag[0];

  std::vector<double> bb(diag.begin(), diag.end());
  bb[0] = diag[0] - gam;
  bb[n - 1] = diag[n - 1] - corner_bottom * corner_top / gam;

  auto thomas = [&](std::span<const double> r) {
    std::vector<double> cp(n), x(n);
    double denom = bb[0];
    cp[0] = upper[0] / denom;
    x[0] = r[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      denom = bb[i] - lower[i] * cp[i - 1];
      cp[i] = upper[i] / denom;
      x[i] = (r[i] - lower[i] * x[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
    return x;
  };

  std::vector<double> x = thomas(rhs);
  std::vector<double> e(n, 0.0);
  e[0] = gam;
  e[n - 1] = corner_bottom;
  const std::vector<double> z = thomas(e);
  const double fact = (x[0] + corner_top * x[n - 1] / gam) / (1.0 + z[0] + corner_top * z[n - 1] / gam);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

enum class MonotoneMethod { Newton, Relaxation };

struct MonotoneSolveStats {
  double residual_inf = 0.0;
  int iterations = 0;
};

/// Problem data for F(u) = 0 above. `nodes` holds y_i (already scaled by
/// 1/eps where relevant); `dx` is the mesh width used in D+-.
template <PeriodicHamiltonian H>
struct MonotoneSystem {
  NumericalFlux<H> flux;
  std::span<const double> nodes;
  double dx;
  double shift = 0.0;
  double c = 1.0;
  double s = 1.0;
  std::span<const double> rhs;  // empty means zero

  double rhs_at(std::size_t i) const { return rhs.empty() ? 0.0 : rhs[i]; }

  void residual(std::span<const double> u, std::span<double> out) const {
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double um = u[(i + n - 1) % n], up = u[(i + 1) % n];
      const double pm = shift + (u[i] - um) / dx;
      const double pp = shift + (up - u[i]) / dx;
      out[i] = c * u[i] + s * flux(nodes[i], pm, pp).value - rhs_at(i);
    }
  }

  // Diagonal bound used by the relaxation sweep: c + s * theta / dx
  // dominates dF_i/du_i for both supported fluxes.
  double relaxation_diagonal() const { return c + s * std::max(flux.theta, 1.0) / dx; }
};

namespace detail {
inline double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
}  // namespace detail

/// Solve F(u) = 0 in place. `u` holds the initial guess.
template <PeriodicHamiltonian H>
MonotoneSolveStats solve_monotone(const MonotoneSystem<H>& sys, std::span<double> u, double tol,
                                  int max_iter, MonotoneMethod method = MonotoneMethod::Newton,
                                  double relax_step = 1.0) {
  const std::size_t n = u.size();
  std::vector<double> f(n);
  MonotoneSolveStats stats;
  sys.residual(u, f);
  stats.residual_inf = detail::inf_norm(f);

  if (method == MonotoneMethod::Relaxation) {
    const double w = relax_step / sys.relaxation_diagonal();
    while (stats.residual_inf > tol && stats.iterations < max_iter) {
      for (std::size_t i = 0; i < n; ++i) u[i] -= w * f[i];
      sys.residual(u, f);
      stats.residual_inf = detail::inf_norm(f);
      ++stats.iterations;
    }
    return stats;
  }

  std::vector<double> lower(n), diag(n), upper(n), trial(n), ftrial(n);
  double best = stats.residual_inf;
  int stalls = 0;
  while (stats.residual_inf > tol && stats.iterations < max_iter) {
    for (std::size_t i = 0; i < n; ++i) {
      const double um = u[(i + n - 1) % n], up = u[(i + 1) % n];
      const double pm = sys.shift + (u[i] - um) / sys.dx;
      const double pp = sys.shift + (up - u[i]) / sys.dx;
      const FluxValue g = sys.flux(sys.nodes[i], pm, pp);
      diag[i] = sys.c + sys.s * (g.d_minus - g.d_plus) / sys.dx;
      lower[i] = -sys.s * g.d_minus / sys.dx;
      upper[i] = sys.s * g.d_plus / sys.dx;
    }
    const std::vector<double> step = solve_cyclic_tridiagonal(lower, diag, upper, f);

    // Full steps first: for convex fluxes Newton converges monotonically
    // after one iterate even when the residual grows on the way. Once the
    // residual has failed to improve a few times in a row, backtrack on
    // the sup norm, falling back to relaxation sweeps, which always contract.
    // A full step may also leave the domain of H (a tabulated H only
    // covers a bounded slope range); such trials are halved like
    // non-finite ones.
    const bool damped = stalls >= 4;
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] - t * step[i];
      double r = std::numeric_limits<double>::infinity();
      try {
        sys.residual(trial, ftrial);
        r = detail::inf_norm(ftrial);
      } catch (const DomainError&) {
      }
      if (!std::isfinite(r)) continue;
      if (!damped || r < (1.0 - 1e-4 * t) * stats.residual_inf || r <= tol) {
        stalls = (r < best) ? 0 : stalls + 1;
        best = std::min(best, r);
        std::copy(trial.begin(), trial.end(), u.begin());
        f.swap(ftrial);
        stats.residual_inf = r;
        accepted = true;
        break;
      }
    }
    ++stats.iterations;
    if (!accepted) {
      const double w = 1.0 / sys.relaxation_diagonal();
      for (int k = 0; k < 50; ++k) {
        for (std::size_t i = 0; i < n; ++i) u[i] -= w * f[i];
        sys.residual(u, f);
      }
      stats.residual_inf = detail::inf_norm(f);
      best = std::min(best, stats.residual_inf);
    }
  }
  return stats;
}

}  // namespace tfhom
