#pragma once

// Parabolic sup/inf convolutions in time on a uniform grid,
//
//   f^d(t) = max_xi  f(xi) - |t - xi|^2 / (2d),
//   f_d(t) = min_xi  f(xi) + |t - xi|^2 / (2d),
//
// their quantitative regularity checks, and the eta_delta constant that
// measures how far f^d is from solving the shifted fractional equation.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tfhom/errors.hpp"
#include "tfhom/fraccalc.hpp"

namespace tfhom {

enum class ConvolutionKind { Sup, Inf };

struct ConvolvedFunction {
  HistoryScalar base;
  double delta;
  ConvolutionKind kind;
  std::vector<double> values;
  std::vector<int> argpoints;  // maximizing / minimizing node, smallest on ties
};

namespace detail {
inline ConvolvedFunction convolve(const HistoryScalar& f, double delta, ConvolutionKind kind) {
  if (!(delta > 0.0)) throw DomainError("convolution: delta must be > 0");
  const auto& v = f.samples;
  const int n = static_cast<int>(v.size());
  const double dt = f.grid.dt();
  // penalty depends on the lag only
  std::vector<double> pen(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) pen[k] = (k * dt) * (k * dt) / (2.0 * delta);
  ConvolvedFunction out{f, delta, kind, std::vector<double>(static_cast<std::size_t>(n)),
                        std::vector<int>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    double best = 0.0;
    int arg = -1;
    for (int m = 0; m < n; ++m) {
      const double p = pen[std::abs(i - m)];
      const double c = (kind == ConvolutionKind::Sup) ? v[m] - p : v[m] + p;
      if (arg < 0 || (kind == ConvolutionKind::Sup ? c > best : c < best)) {
        best = c;
        arg = m;
      }
    }
    out.values[i] = best;
    out.argpoints[i] = arg;
  }
  return out;
}
}  // namespace detail

inline ConvolvedFunction sup_convolve(const HistoryScalar& f, double delta) {
  return detail::convolve(f, delta, ConvolutionKind::Sup);
}

inline ConvolvedFunction inf_convolve(const HistoryScalar& f, double delta) {
  return detail::convolve(f, delta, ConvolutionKind::Inf);
}

/// Largest |f(t_m) - f(t_n)| / |t_m - t_n|^alpha over all node pairs.
inline double holder_constant(std::span<const double> f, double dt, double alpha) {
  const int n = static_cast<int>(f.size());
  std::vector<double> inv(static_cast<std::size_t>(std::max(n, 1)));
  for (int k = 1; k < n; ++k) inv[k] = std::pow(k * dt, -alpha);
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) best = std::max(best, std::abs(f[j] - f[i]) * inv[j - i]);
  return best;
}

/// One checked item: the measured left side, the bound it is held to.
struct BoundCheck {
  bool ok = false;
  double measured = 0.0;
  double bound = 0.0;
};

struct Lemma36Report {
  double delta = 0.0;
  double holder_m = 0.0;
  double alpha = 0.0;
  double grid_slack = 0.0;
  double c_const = 0.0;  // 2 osc(f) + T
  BoundCheck ordering;   // f <= f^d <= sup|f|; measured = max(f - f^d, f^d - sup|f|)
  BoundCheck lipschitz;  // Lip_t f^d <= C / delta
  BoundCheck argpoint;   // max |t - xi|^(2-a) <= 2 M delta + slack
  BoundCheck distance;   // sup |f^d - f| <= (2M)^(2/(2-a)) delta^(a/(2-a)) + slack
  BoundCheck holder;     // Holder_a(f^d) <= 16 C M

  bool all_ok() const noexcept { return ordering.ok && lipschitz.ok && argpoint.ok && distance.ok && holder.ok; }
};

/// Check the sup-convolution estimates for an alpha-Holder f with
/// constant M. Throws CertificationError when f is not M-Holder on the grid.
inline Lemma36Report check_lemma36(const HistoryScalar& f, double delta, double holder_m, double alpha) {
  if (!(delta > 0.0)) throw DomainError("check_lemma36: delta must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("check_lemma36: alpha must lie in (0, 1]");
  if (!(holder_m >= 0.0)) throw DomainError("check_lemma36: Holder constant must be >= 0");
  const double dt = f.grid.dt();
  const auto& v = f.samples;
  const double measured_m = holder_constant(v, dt, alpha);
  if (measured_m > holder_m * (1.0 + 1e-12) + 1e-14)
    throw CertificationError("check_lemma36: f is not " + std::to_string(alpha) + "-Holder with constant " +
                             std::to_string(holder_m) + " on the grid (measured " +
                             std::to_string(measured_m) + ")");

  const ConvolvedFunction fd = sup_convolve(f, delta);
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  double sup_abs = 0.0;
  for (double x : v) sup_abs = std::max(sup_abs, std::abs(x));
  const double t_span = dt * static_cast<double>(v.size() - 1);

  Lemma36Report r;
  r.delta = delta;
  r.holder_m = holder_m;
  r.alpha = alpha;
  r.grid_slack = 2.0 * std::pow(dt, alpha) * holder_m;
  r.c_const = 2.0 * (*hi_it - *lo_it) + t_span;

  double order_gap = -std::numeric_limits<double>::infinity();
  double lip = 0.0, arg = 0.0, dist = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    order_gap = std::max({order_gap, v[i] - fd.values[i], fd.values[i] - sup_abs});
    if (i + 1 < v.size()) lip = std::max(lip, std::abs(fd.values[i + 1] - fd.values[i]) / dt);
    const double lag = std::abs(static_cast<double>(i) - fd.argpoints[i]) * dt;
    arg = std::max(arg, std::pow(lag, 2.0 - alpha));
    dist = std::max(dist, std::abs(fd.values[i] - v[i]));
  }
  r.ordering = {order_gap <= 0.0, order_gap, 0.0};
  r.lipschitz = {false, lip, r.c_const / delta};
  r.lipschitz.ok = lip <= r.lipschitz.bound;
  r.argpoint = {false, arg, 2.0 * holder_m * delta + r.grid_slack};
  r.argpoint.ok = arg <= r.argpoint.bound;
  r.distance = {false, dist,
                std::pow(2.0 * holder_m, 2.0 / (2.0 - alpha)) * std::pow(delta, alpha / (2.0 - alpha)) + r.grid_slack};
  r.distance.ok = dist <= r.distance.bound;
  r.holder = {false, holder_constant(fd.values, dt, alpha), 16.0 * r.c_const * holder_m};
  r.holder.ok = r.holder.measured <= r.holder.bound;
  return r;
}

/// eta = 2^(a+2) a M^(2-a) / G(1-a) * delta^((1-a)/4).
inline double eta_delta(const FracOrder& frac, double holder_m, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("eta_delta: delta must lie in (0,1), got " + std::to_string(delta));
  if (!(holder_m >= 0.0)) throw DomainError("eta_delta: Holder constant must be >= 0");
  const double a = frac.alpha();
  return std::pow(2.0, a + 2.0) * a * std::pow(holder_m, 2.0 - a) / frac.gamma_1ma() * std::pow(delta, (1.0 - a) / 4.0);
}

}  // namespace tfhom
