#pragma once

// epsilon sweep: solve the oscillatory problem for each eps, the effective
// problem once, and fit the decay order of the sup-norm gap.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfhom/cell.hpp"
#include "tfhom/errors.hpp"
#include "tfhom/hamiltonian.hpp"
#include "tfhom/tfhj.hpp"

namespace tfhom {

/// max_{n,i} |ue - ubar| over coincident nodes.
inline double sup_error(const FieldHistory& ue, const FieldHistory& ubar) {
  if (!ue.same_shape(ubar)) throw ShapeError("sup_error: space-time grids differ");
  double m = 0.0;
  for (int n = 0; n <= ue.n_steps(); ++n) {
    const auto a = ue.row(n), b = ubar.row(n);
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

/// Least-squares slope of log(error) against log(eps).
inline double fit_rate(std::span<const double> eps, std::span<const double> errors) {
  if (eps.size() != errors.size()) throw ShapeError("fit_rate: eps and errors differ in length");
  if (eps.size() < 3) throw DegenerateFitError("fit_rate: need at least 3 points");
  std::vector<double> le, lr;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(errors[k] > 0.0)) throw DegenerateFitError("fit_rate: error " + std::to_string(k) + " is not positive");
    if (!(eps[k] > 0.0)) throw DomainError("fit_rate: eps must be > 0");
    le.push_back(std::log(eps[k]));
    lr.push_back(std::log(errors[k]));
  }
  return least_squares(le, lr).slope;
}

inline double theorem_exponent(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("nu must lie in (0,1)");
  return 1.0 / (3.0 * (2.0 - nu));
}

// Errors at or below this level mean homogenization is exact for the run.
inline constexpr double kExactErrorLevel = 1e-8;

struct SweepConfig {
  HamiltonianSpec hamiltonian = HamiltonianSpec::eikonal_potential(1.0, 1);
  InitialData u0 = InitialData::cosine(0.25, 1);
  std::optional<double> alpha = 0.5;  // empty selects the classical equation
  double t_final = 1.0;
  int n_steps = 2000;
  int n_cells = 1024;
  int cell_n_cells = 512;
  std::vector<double> eps_ladder{1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  std::vector<double> lambda_ladder{0.1, 0.05, 0.025, 0.0125};
  double p_lo = -4.0;
  double p_hi = 4.0;
  int p_count = 33;
  double nu = 0.5;
  double cell_tol = 1e-10;
  Stepping stepping = Stepping::Implicit;
  FluxKind flux = FluxKind::Godunov;
};

struct RateReport {
  std::vector<double> eps_ladder;
  std::vector<double> errors;
  std::optional<double> fitted_order;
  double nu = 0.5;
  double theorem_exponent = 0.0;
  bool strictly_decreasing = false;
  bool degenerate = false;  // every error at roundoff: exact homogenization
  bool pass = false;
  std::string failure;  // nonempty when the sweep aborted; errors are then partial
  std::optional<double> alpha;
};

inline bool strictly_decreasing(std::span<const double> v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1])) return false;
  return true;
}

/// Fill fitted_order, degenerate and pass from eps_ladder and errors.
inline void finalize_report(RateReport& r) {
  r.theorem_exponent = theorem_exponent(r.nu);
  r.strictly_decreasing = strictly_decreasing(r.errors);
  if (!r.failure.empty()) {
    r.pass = false;
    return;
  }
  r.degenerate = !r.errors.empty() &&
                 std::all_of(r.errors.begin(), r.errors.end(), [](double e) { return e <= kExactErrorLevel; });
  if (r.degenerate) {
    r.fitted_order.reset();
    r.pass = true;
    return;
  }
  try {
    r.fitted_order = fit_rate(r.eps_ladder, r.errors);
  } catch (const DegenerateFitError& e) {
    r.failure = e.what();
    r.pass = false;
    return;
  }
  r.pass = r.strictly_decreasing && *r.fitted_order >= r.theorem_exponent - 0.02;
}

inline EffectiveTable sweep_table(const SweepConfig& c) {
  return build_effective_table(c.hamiltonian, uniform_p_grid(c.p_lo, c.p_hi, c.p_count), c.lambda_ladder,
                               TorusGrid(c.cell_n_cells), c.cell_tol);
}

/// Solve the effective problem for `c` with a prebuilt table.
inline FieldHistory solve_effective(const SweepConfig& c, const EffectiveTable& table) {
  std::optional<FracOrder> frac;
  if (c.alpha) frac = FracOrder(*c.alpha);
  const TorusGrid grid(c.n_cells);
  SchemeParams sp = make_scheme_params(table.lip_p(), c.t_final, c.n_steps, grid, frac, c.stepping);
  sp.flux = c.flux;
  return solve(table, c.u0, std::nullopt, frac, c.t_final, c.n_steps, grid, sp);
}

inline FieldHistory solve_oscillatory(const SweepConfig& c, double eps) {
  std::optional<FracOrder> frac;
  if (c.alpha) frac = FracOrder(*c.alpha);
  const TorusGrid grid(c.n_cells);
  SchemeParams sp = make_scheme_params(c.hamiltonian.lip_p(), c.t_final, c.n_steps, grid, frac, c.stepping);
  sp.flux = c.flux;
  return solve(c.hamiltonian, c.u0, eps, frac, c.t_final, c.n_steps, grid, sp);
}

/// Full sweep. Solver errors abort the sweep; the report then carries the
/// errors computed so far and a failure message instead of throwing.
inline RateReport run_sweep(const SweepConfig& c) {
  RateReport r;
  r.nu = c.nu;
  r.alpha = c.alpha;
  r.theorem_exponent = theorem_exponent(c.nu);
  try {
    const EffectiveTable table = sweep_table(c);
    const FieldHistory ubar = solve_effective(c, table);
    for (double eps : c.eps_ladder) {
      const FieldHistory ue = solve_oscillatory(c, eps);
      r.eps_ladder.push_back(eps);
      r.errors.push_back(sup_error(ue, ubar));
    }
  } catch (const Error& e) {
    r.failure = e.what();
  }
  finalize_report(r);
  return r;
}

}  // namespace tfhom
