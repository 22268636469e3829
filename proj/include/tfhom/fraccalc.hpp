#pragma once

// Caputo fractional calculus on uniform time grids.
//
// Two quadratures of the Caputo derivative of order alpha in (0,1) are
// provided. Both act on the piecewise-linear interpolant of sampled data:
//
//   L1 form:     d^a f(t_n) = dt^-a / G(2-a) * sum_k b_k (f_{n-k} - f_{n-k-1})
//   J + K form:  d^a f(t)   = (f(t) - f(0)) / (t^a G(1-a))
//                           + a/G(1-a) * int_0^t (f(t) - f(t-s)) s^-(a+1) ds
//
// Since the K integral is evaluated in closed form against the same
// interpolant, the two agree to roundoff rather than only asymptotically.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "tfhom/errors.hpp"

namespace tfhom {

/// Gamma function on (0, 170]; the library call with explicit domain guards.
inline double gamma(double x) {
  if (!(x > 0.0)) throw DomainError("gamma: argument must be > 0, got " + std::to_string(x));
  if (x > 170.0) throw DomainError("gamma: overflow for argument " + std::to_string(x));
  return std::tgamma(x);
}

/// Fractional order alpha in (0,1) with the Gamma values the solvers need.
class FracOrder {
 public:
  explicit FracOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw DomainError("alpha must lie in the open interval (0,1), got " + std::to_string(alpha));
    gamma_1ma_ = gamma(1.0 - alpha);
    gamma_2ma_ = gamma(2.0 - alpha);
    gamma_1pa_ = gamma(1.0 + alpha);
  }

  double alpha() const noexcept { return alpha_; }
  double gamma_1ma() const noexcept { return gamma_1ma_; }
  double gamma_2ma() const noexcept { return gamma_2ma_; }
  double gamma_1pa() const noexcept { return gamma_1pa_; }

 private:
  double alpha_;
  double gamma_1ma_;
  double gamma_2ma_;
  double gamma_1pa_;
};

/// L1 weights b_k = (k+1)^(1-a) - k^(1-a), k = 0..n-1.
inline std::vector<double> l1_weights(double alpha, int n) {
  std::vector<double> b(static_cast<std::size_t>(n));
  const double e = 1.0 - alpha;
  for (int k = 0; k < n; ++k) b[k] = std::pow(k + 1.0, e) - std::pow(static_cast<double>(k), e);
  return b;
}

/// Uniform grid t_n = n * dt on [0, T] carrying the L1 history weights.
class TimeGrid {
 public:
  TimeGrid(double t_final, int n_steps, FracOrder frac)
      : t_final_(t_final), n_steps_(n_steps), frac_(frac) {
    if (!(t_final > 0.0)) throw DomainError("time grid: T must be > 0");
    if (n_steps < 1) throw DomainError("time grid: n_steps must be >= 1");
    dt_ = t_final / n_steps;
    weights_ = tfhom::l1_weights(frac.alpha(), n_steps);
  }

  double t_final() const noexcept { return t_final_; }
  int n_steps() const noexcept { return n_steps_; }
  double dt() const noexcept { return dt_; }
  double time(int n) const noexcept { return n * dt_; }
  const FracOrder& frac() const noexcept { return frac_; }
  std::span<const double> l1_weights() const noexcept { return weights_; }

 private:
  double t_final_;
  int n_steps_;
  double dt_;
  FracOrder frac_;
  std::vector<double> weights_;
};

/// Samples f(t_0) .. f(t_m) of a scalar function on a prefix of a TimeGrid.
struct HistoryScalar {
  TimeGrid grid;
  std::vector<double> samples;

  HistoryScalar(TimeGrid g, std::vector<double> s) : grid(std::move(g)), samples(std::move(s)) {
    if (samples.empty()) throw DomainError("history must hold at least f(0)");
    if (samples.size() > static_cast<std::size_t>(grid.n_steps()) + 1)
      throw DomainError("history longer than its time grid");
  }

  template <class F>
  static HistoryScalar sample(const TimeGrid& g, F&& f) {
    std::vector<double> s(static_cast<std::size_t>(g.n_steps()) + 1);
    for (std::size_t n = 0; n < s.size(); ++n) s[n] = f(g.time(static_cast<int>(n)));
    return HistoryScalar(g, std::move(s));
  }

  int last_index() const noexcept { return static_cast<int>(samples.size()) - 1; }
};

namespace detail {
inline void check_index(const HistoryScalar& f, int n) {
  if (n < 1 || n > f.last_index())
    throw DomainError("Caputo derivative index must satisfy 1 <= n <= " +
                      std::to_string(f.last_index()) + ", got " + std::to_string(n));
}
}  // namespace detail

/// L1 quadrature of the Caputo derivative at t_n.
inline double caputo_l1(const HistoryScalar& f, int n) {
  detail::check_index(f, n);
  const auto b = f.grid.l1_weights();
  const auto& u = f.samples;
  const FracOrder& fr = f.grid.frac();
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += b[k] * (u[n - k] - u[n - k - 1]);
  return acc * std::pow(f.grid.dt(), -fr.alpha()) / fr.gamma_2ma();
}

struct CaputoSplit {
  double j_part;
  double k_head;  // K over (0, r)
  double k_tail;  // K over (r, t_n)
  double sum() const noexcept { return j_part + k_head + k_tail; }
};

namespace detail {
// K_(a,b)[f](t_n) for the piecewise-linear interpolant of f.
// On segment j (s in [j dt, (j+1) dt]) f(t_n) - f(t_n - s) = A + B s, and
// the integral of (A + B s) s^-(a+1) has a closed-form antiderivative.
inline double k_integral(const HistoryScalar& f, int n, double lo, double hi) {
  const double dt = f.grid.dt();
  const double a = f.grid.frac().alpha();
  const auto& u = f.samples;
  double acc = 0.0;
  const int j_begin = static_cast<int>(std::floor(lo / dt));
  for (int j = std::max(0, j_begin); j < n; ++j) {
    const double s0 = std::max(lo, j * dt);
    const double s1 = std::min(hi, (j + 1) * dt);
    if (s1 <= s0) {
      if (j * dt >= hi) break;
      continue;
    }
    const double slope = (u[n - j] - u[n - j - 1]) / dt;
    const double offset = (j == 0) ? 0.0 : (u[n] - u[n - j]) - slope * (j * dt);
    double piece = slope * (std::pow(s1, 1.0 - a) - std::pow(s0, 1.0 - a)) / (1.0 - a);
    if (offset != 0.0) piece += offset * (std::pow(s0, -a) - std::pow(s1, -a)) / a;
    acc += piece;
  }
  const FracOrder& fr = f.grid.frac();
  return a / fr.gamma_1ma() * acc;
}
}  // namespace detail

/// J / K splitting of the Caputo derivative at t_n with the K integral cut at r.
inline CaputoSplit caputo_jk(const HistoryScalar& f, int n, double r) {
  detail::check_index(f, n);
  const double tn = f.grid.time(n);
  if (!(r > 0.0 && r < tn))
    throw DomainError("caputo_jk: split point must lie in (0, t_n)");
  const FracOrder& fr = f.grid.frac();
  CaputoSplit out{};
  out.j_part = (f.samples[n] - f.samples[0]) / (std::pow(tn, fr.alpha()) * fr.gamma_1ma());
  out.k_head = detail::k_integral(f, n, 0.0, r);
  out.k_tail = detail::k_integral(f, n, r, tn);
  return out;
}

/// Closed form d^a t^g = G(g+1)/G(g+1-a) t^(g-a), for g >= a and t > 0.
inline double caputo_power_oracle(double exponent, const FracOrder& frac, double t) {
  if (exponent < frac.alpha())
    throw DomainError("caputo_power_oracle: exponent must be >= alpha");
  if (!(t > 0.0)) throw DomainError("caputo_power_oracle: t must be > 0");
  return gamma(exponent + 1.0) / gamma(exponent + 1.0 - frac.alpha()) *
         std::pow(t, exponent - frac.alpha());
}

}  // namespace tfhom
