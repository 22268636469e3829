#pragma once

// Monotone L1 time stepping for  d^a_t u + H(x/eps, Du) = 0  on the unit
// torus, and for the effective problem  d^a_t u + Hbar(Du) = 0.
//
// With tau = G(2-a) dt^a and b_k the L1 weights, one step reads
//
//   u^n + tau * G(x/eps, D-u, D+u) = u^{n-1} - sum_{k=1}^{n-1} b_k (u^{n-k} - u^{n-k-1})
//
// where G is a monotone numerical Hamiltonian evaluated at u^{n-1}
// (explicit) or at u^n (implicit). The right side is nondecreasing in every
// earlier time level because b_k decreases, so both variants inherit a
// discrete comparison principle; the explicit one only while
// tau * theta / dx <= 1 - b_1.
//
// Without a FracOrder the same code runs the classical equation
// u_t + H = 0 (tau = dt, no history term).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfhom/cell.hpp"
#include "tfhom/errors.hpp"
#include "tfhom/fraccalc.hpp"
#include "tfhom/hamiltonian.hpp"
#include "tfhom/monotone.hpp"

namespace tfhom {

enum class Stepping { Explicit, Implicit };

/// Space-time solution u[n][i], n = 0..n_steps, i = 0..n_cells-1.
/// `eps` is empty for the effective problem; `frac` is empty for the
/// classical baseline.
class FieldHistory {
 public:
  FieldHistory(TorusGrid grid, double t_final, int n_steps, std::optional<double> eps,
               std::optional<FracOrder> frac)
      : grid_(std::move(grid)), t_final_(t_final), n_steps_(n_steps), eps_(eps), frac_(frac) {
    if (!(t_final > 0.0) || n_steps < 1) throw DomainError("field history: need T > 0 and n_steps >= 1");
    if (eps && !(*eps > 0.0)) throw DomainError("field history: eps must be > 0");
    data_.assign(static_cast<std::size_t>(n_steps + 1) * static_cast<std::size_t>(grid_.n_cells()), 0.0);
    if (frac_) weights_ = tfhom::l1_weights(frac_->alpha(), n_steps);
  }

  const TorusGrid& grid() const noexcept { return grid_; }
  int n_cells() const noexcept { return grid_.n_cells(); }
  int n_steps() const noexcept { return n_steps_; }
  double t_final() const noexcept { return t_final_; }
  double dt() const noexcept { return t_final_ / n_steps_; }
  double time(int n) const noexcept { return n * dt(); }
  std::optional<double> eps() const noexcept { return eps_; }
  bool effective() const noexcept { return !eps_.has_value(); }
  const std::optional<FracOrder>& frac() const noexcept { return frac_; }
  std::span<const double> l1_weights() const noexcept { return weights_; }

  std::span<double> row(int n) {
    return {data_.data() + static_cast<std::size_t>(n) * n_cells(), static_cast<std::size_t>(n_cells())};
  }
  std::span<const double> row(int n) const {
    return {data_.data() + static_cast<std::size_t>(n) * n_cells(), static_cast<std::size_t>(n_cells())};
  }
  double operator()(int n, int i) const { return data_[static_cast<std::size_t>(n) * n_cells() + i]; }
  double& operator()(int n, int i) { return data_[static_cast<std::size_t>(n) * n_cells() + i]; }

  bool same_shape(const FieldHistory& o) const noexcept {
    return grid_ == o.grid_ && n_steps_ == o.n_steps_ && t_final_ == o.t_final_;
  }

 private:
  TorusGrid grid_;
  double t_final_;
  int n_steps_;
  std::optional<double> eps_;
  std::optional<FracOrder> frac_;
  std::vector<double> weights_;
  std::vector<double> data_;
};

struct SchemeParams {
  double theta_lf = 1.0;
  double dt = 0.0;
  double dx = 0.0;
  double tau = 0.0;        // G(2-a) dt^a, or dt for the classical branch
  double cfl_ratio = 0.0;  // tau * theta_lf / dx
  double cfl_limit = 1.0;  // explicit monotonicity bound on cfl_ratio
  Stepping stepping = Stepping::Implicit;
  FluxKind flux = FluxKind::LaxFriedrichs;
  double newton_tol = 1e-12;
  int newton_max_iter = 100;
};

inline SchemeParams make_scheme_params(double theta_lf, double t_final, int n_steps, const TorusGrid& grid,
                                       const std::optional<FracOrder>& frac,
                                       Stepping stepping = Stepping::Implicit) {
  if (n_steps < 1) throw DomainError("scheme: n_steps must be >= 1");
  SchemeParams sp;
  sp.theta_lf = theta_lf;
  sp.dt = t_final / n_steps;
  sp.dx = grid.dy();
  sp.stepping = stepping;
  if (frac) {
    sp.tau = frac->gamma_2ma() * std::pow(sp.dt, frac->alpha());
    sp.cfl_limit = 2.0 - std::pow(2.0, 1.0 - frac->alpha());  // 1 - b_1
  } else {
    sp.tau = sp.dt;
    sp.cfl_limit = 1.0;
  }
  sp.cfl_ratio = sp.tau * theta_lf / sp.dx;
  return sp;
}

namespace detail {
inline void check_cfl(const SchemeParams& sp) {
  if (sp.stepping == Stepping::Explicit && sp.cfl_ratio > sp.cfl_limit * (1.0 + 1e-12))
    throw ConfigError("tfhj: CFL violation, explicit monotone stepping needs tau*theta/dx = " +
                      std::to_string(sp.cfl_ratio) + " <= " + std::to_string(sp.cfl_limit));
}

inline std::vector<double> scaled_nodes(const FieldHistory& s) {
  std::vector<double> y(s.grid().nodes().begin(), s.grid().nodes().end());
  if (s.eps())
    for (double& v : y) v /= *s.eps();
  return y;
}

// r = u^{n-1} - sum_{k=1}^{n-1} b_k (u^{n-k} - u^{n-k-1}), accumulated as a
// single weighted sum over the stored rows.
inline void history_rhs(const FieldHistory& s, int n, std::span<double> r) {
  const auto prev = s.row(n - 1);
  std::copy(prev.begin(), prev.end(), r.begin());
  if (!s.frac() || n < 2) return;
  const auto b = s.l1_weights();
  for (int j = 0; j <= n - 1; ++j) {
    double w = 0.0;
    if (j >= 1) w += b[n - j];
    if (j <= n - 2) w -= b[n - 1 - j];
    const auto rj = s.row(j);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= w * rj[i];
  }
}

template <PeriodicHamiltonian H>
void step_with_nodes(FieldHistory& state, const SchemeParams& params, const H& h, int n,
                     std::span<const double> nodes) {
  if (n < 1 || n > state.n_steps()) throw DomainError("tfhj: step index out of range");
  check_cfl(params);
  const std::size_t nc = static_cast<std::size_t>(state.n_cells());
  std::vector<double> r(nc);
  history_rhs(state, n, r);
  const NumericalFlux<H> flux{&h, params.theta_lf, params.flux};
  auto out = state.row(n);
  if (params.stepping == Stepping::Explicit) {
    const auto u = state.row(n - 1);
    for (std::size_t i = 0; i < nc; ++i) {
      const double pm = (u[i] - u[(i + nc - 1) % nc]) / params.dx;
      const double pp = (u[(i + 1) % nc] - u[i]) / params.dx;
      out[i] = r[i] - params.tau * flux(nodes[i], pm, pp).value;
    }
    return;
  }
  const auto prev = state.row(n - 1);
  std::copy(prev.begin(), prev.end(), out.begin());
  MonotoneSystem<H> sys{flux, nodes, params.dx, 0.0, 1.0, params.tau, r};
  const MonotoneSolveStats st = solve_monotone(sys, out, params.newton_tol, params.newton_max_iter);
  if (st.residual_inf > params.newton_tol)
    throw ConvergenceError("tfhj: implicit step " + std::to_string(n) + " did not converge (residual " +
                               std::to_string(st.residual_inf) + ")",
                           st.residual_inf);
}

inline void check_flux_viscosity(const SchemeParams& sp, double lip_p) {
  if (sp.flux == FluxKind::LaxFriedrichs && sp.theta_lf < lip_p)
    throw ConfigError("tfhj: theta_lf = " + std::to_string(sp.theta_lf) + " below the Hamiltonian's lip_p = " +
                      std::to_string(lip_p));
}
}  // namespace detail

/// Fill row n from rows 0..n-1.
template <PeriodicHamiltonian H>
void step(FieldHistory& state, const SchemeParams& params, const H& h, int n) {
  detail::check_flux_viscosity(params, h.lip_p());
  const std::vector<double> nodes = detail::scaled_nodes(state);
  detail::step_with_nodes(state, params, h, n, nodes);
}

inline void check_resolution(const TorusGrid& grid, double eps) {
  if (!(eps > 0.0)) throw DomainError("tfhj: eps must be > 0");
  const double inv = 1.0 / eps;
  if (std::abs(inv - std::round(inv)) > 1e-9 * inv)
    throw DomainError("tfhj: 1/eps must be an integer so H(x/eps, p) is periodic on the torus, got eps = " +
                      std::to_string(eps));
  if (grid.dy() > eps / 16.0 * (1.0 + 1e-12))
    throw ConfigError("tfhj: resolution error, dx = " + std::to_string(grid.dy()) + " exceeds eps/16 = " +
                      std::to_string(eps / 16.0));
}

/// Solve from u0 on [0, T]. eps = nullopt selects the effective problem
/// (H is then typically an EffectiveTable); frac = nullopt selects the
/// classical time derivative.
template <PeriodicHamiltonian H>
FieldHistory solve(const H& h, const InitialData& u0, std::optional<double> eps,
                   const std::optional<FracOrder>& frac, double t_final, int n_steps, const TorusGrid& grid,
                   const SchemeParams& params) {
  if (eps) check_resolution(grid, *eps);
  detail::check_flux_viscosity(params, h.lip_p());
  detail::check_cfl(params);
  FieldHistory state(grid, t_final, n_steps, eps, frac);
  auto r0 = state.row(0);
  for (int i = 0; i < grid.n_cells(); ++i) r0[i] = u0(grid.node(i));
  const std::vector<double> nodes = detail::scaled_nodes(state);
  for (int n = 1; n <= n_steps; ++n) detail::step_with_nodes(state, params, h, n, nodes);
  return state;
}

/// Same as above starting from explicit node values (used for shifted or
/// perturbed initial data).
template <PeriodicHamiltonian H>
FieldHistory solve_from(const H& h, std::span<const double> initial, std::optional<double> eps,
                        const std::optional<FracOrder>& frac, double t_final, int n_steps, const TorusGrid& grid,
                        const SchemeParams& params) {
  if (initial.size() != static_cast<std::size_t>(grid.n_cells())) throw ShapeError("tfhj: initial data size");
  if (eps) check_resolution(grid, *eps);
  detail::check_flux_viscosity(params, h.lip_p());
  detail::check_cfl(params);
  FieldHistory state(grid, t_final, n_steps, eps, frac);
  std::copy(initial.begin(), initial.end(), state.row(0).begin());
  const std::vector<double> nodes = detail::scaled_nodes(state);
  for (int n = 1; n <= n_steps; ++n) detail::step_with_nodes(state, params, h, n, nodes);
  return state;
}

/// max_{n,i} (ua - ub). For ordered initial data a monotone scheme keeps this <= 0.
inline double comparison_check(const FieldHistory& ua, const FieldHistory& ub) {
  if (!ua.same_shape(ub)) throw ShapeError("comparison_check: grids differ");
  const auto a0 = ua.row(0), b0 = ub.row(0);
  for (std::size_t i = 0; i < a0.size(); ++i)
    if (a0[i] > b0[i]) throw DomainError("comparison_check: initial data are not ordered (ua[0] <= ub[0] fails)");
  double worst = -std::numeric_limits<double>::infinity();
  for (int n = 0; n <= ua.n_steps(); ++n) {
    const auto a = ua.row(n), b = ub.row(n);
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, a[i] - b[i]);
  }
  return worst;
}

/// max over i and n < m of |u[m][i] - u[n][i]| / (t_m - t_n)^alpha.
inline double time_holder_seminorm(const FieldHistory& state, double alpha) {
  if (state.n_steps() < 2) throw DomainError("time_holder_seminorm: needs n_steps >= 2");
  const int ns = state.n_steps();
  std::vector<double> inv_lag(static_cast<std::size_t>(ns + 1));
  for (int k = 1; k <= ns; ++k) inv_lag[k] = std::pow(k * state.dt(), -alpha);
  double best = 0.0;
  for (int m = 1; m <= ns; ++m) {
    const auto um = state.row(m);
    for (int n = 0; n < m; ++n) {
      const auto un = state.row(n);
      double d = 0.0;
      for (std::size_t i = 0; i < um.size(); ++i) d = std::max(d, std::abs(um[i] - un[i]));
      best = std::max(best, d * inv_lag[m - n]);
    }
  }
  return best;
}

/// max over node pairs of |u_i - u_j| / ((1 + |log d|) d), d the torus
/// distance, taken on every `row_stride`-th time level (and the last).
inline double space_log_modulus(const FieldHistory& state, int row_stride = 1) {
  const TorusGrid& g = state.grid();
  const int nc = g.n_cells();
  std::vector<double> weight(static_cast<std::size_t>(nc));
  for (int k = 1; k < nc; ++k) {
    const double d = g.distance(0, k);
    weight[k] = 1.0 / ((1.0 + std::abs(std::log(d))) * d);
  }
  double best = 0.0;
  auto scan = [&](int n) {
    const auto u = state.row(n);
    for (int i = 0; i < nc; ++i)
      for (int k = 1; k <= nc / 2; ++k) best = std::max(best, std::abs(u[(i + k) % nc] - u[i]) * weight[k]);
  };
  for (int n = 0; n <= state.n_steps(); n += std::max(1, row_stride)) scan(n);
  if (state.n_steps() % std::max(1, row_stride) != 0) scan(state.n_steps());
  return best;
}

/// max_{n,i} ( |u[n][i] - u0(x_i)| - coeff * t_n^a ), with a = 1 on the
/// classical branch. The barrier u0 -/+ Hmax t^a / G(1+a) corresponds to
/// coeff = Hmax / G(1+a); a nonpositive result means it holds.
inline double barrier_excess(const FieldHistory& state, double coeff) {
  const auto u0 = state.row(0);
  const double a = state.frac() ? state.frac()->alpha() : 1.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int n = 0; n <= state.n_steps(); ++n) {
    const double bound = coeff * std::pow(state.time(n), a);
    const auto u = state.row(n);
    for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i] - u0[i]) - bound);
  }
  return worst;
}

inline double sup_norm(const FieldHistory& state) {
  double m = 0.0;
  for (int n = 0; n <= state.n_steps(); ++n)
    for (double v : state.row(n)) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace tfhom
