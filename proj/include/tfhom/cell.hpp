#pragma once

// Discounted cell problem  lambda v + H(y, p + Dv) = 0  on the unit torus,
// the lambda -> 0 extrapolation of -lambda v to the effective Hamiltonian,
// and a quadrature oracle for 1-D eikonal Hamiltonians with a potential.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tfhom/errors.hpp"
#include "tfhom/hamiltonian.hpp"
#include "tfhom/monotone.hpp"

namespace tfhom {

/// Uniform periodic grid y_i = i / n_cells on [0, 1).
class TorusGrid {
 public:
  explicit TorusGrid(int n_cells) : n_(n_cells) {
    if (n_cells < 16) throw DomainError("torus grid needs n_cells >= 16, got " + std::to_string(n_cells));
    nodes_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) nodes_[i] = static_cast<double>(i) / n_;
  }

  int n_cells() const noexcept { return n_; }
  double dy() const noexcept { return 1.0 / n_; }
  double node(int i) const noexcept { return nodes_[wrap(i)]; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  int wrap(int i) const noexcept { return ((i % n_) + n_) % n_; }

  /// Torus distance between nodes i and j.
  double distance(int i, int j) const noexcept {
    const int d = std::abs(i - j) % n_;
    return std::min(d, n_ - d) * dy();
  }

  bool operator==(const TorusGrid& o) const noexcept { return n_ == o.n_; }

 private:
  int n_;
  std::vector<double> nodes_;
};

struct CellSolverOptions {
  MonotoneMethod method = MonotoneMethod::Newton;
  FluxKind flux = FluxKind::LaxFriedrichs;
  double pseudo_time_safety = 0.4;  // dtau = safety * dy / (theta + lambda dy)
};

struct DiscountedSolution {
  double p = 0.0;
  double lambda = 0.0;
  std::vector<double> values;
  double residual_inf = 0.0;
  int iterations = 0;

  double mean() const {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  }
  double oscillation() const {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
  }
};

inline DiscountedSolution solve_discounted(const HamiltonianSpec& h, double p, double lambda,
                                           const TorusGrid& grid, double tol, int max_iter,
                                           const CellSolverOptions& opt = {}) {
  if (!(lambda > 0.0)) throw DomainError("solve_discounted: lambda must be > 0");
  if (!(tol > 0.0)) throw DomainError("solve_discounted: tol must be > 0");
  const double theta = h.lip_p();
  MonotoneSystem<HamiltonianSpec> sys{NumericalFlux<HamiltonianSpec>{&h, theta, opt.flux},
                                      grid.nodes(), grid.dy(), p, lambda, 1.0, {}};
  DiscountedSolution sol;
  sol.p = p;
  sol.lambda = lambda;
  sol.values.resize(static_cast<std::size_t>(grid.n_cells()));
  double mean_h = 0.0;
  for (int i = 0; i < grid.n_cells(); ++i) mean_h += h.eval(grid.node(i), p);
  mean_h /= grid.n_cells();
  std::fill(sol.values.begin(), sol.values.end(), -mean_h / lambda);

  const MonotoneSolveStats st =
      solve_monotone(sys, std::span<double>(sol.values), tol, max_iter, opt.method,
                     opt.method == MonotoneMethod::Relaxation ? opt.pseudo_time_safety : 1.0);
  sol.residual_inf = st.residual_inf;
  sol.iterations = st.iterations;
  if (st.residual_inf > tol)
    throw ConvergenceError("cell: discounted solve did not converge (p = " + std::to_string(p) +
                               ", lambda = " + std::to_string(lambda) +
                               ", residual = " + std::to_string(st.residual_inf) + ")",
                           st.residual_inf);
  return sol;
}

/// Ordinary least squares y = intercept + slope * x.
struct LineFit {
  double intercept;
  double slope;
};

inline LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least squares needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("least squares: abscissae are all equal");
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

/// Which ladder gaps produced fit_slope. The mean gap is preferred; when it
/// vanishes to roundoff (it does so identically on parts of the p axis for
/// some discrete fluxes) the pointwise gap max_y |lambda v + hbar| is used.
enum class GapSource { Mean, Pointwise, Exact };

inline const char* to_string(GapSource g) {
  switch (g) {
    case GapSource::Mean: return "mean";
    case GapSource::Pointwise: return "pointwise";
    case GapSource::Exact: return "exact";
  }
  return "?";
}

struct EffectiveEstimate {
  double hbar = 0.0;
  double fit_slope = std::numeric_limits<double>::quiet_NaN();
  GapSource source = GapSource::Exact;
  std::vector<double> lambdas;
  std::vector<double> gaps;        // |lambda mean(v) + hbar| per ladder entry
  std::vector<double> sup_gaps;    // max_y |lambda v(y) + hbar|
  std::vector<DiscountedSolution> solutions;
};

// Gaps at or below this multiple of (1 + |hbar|) are roundoff: the ladder
// then reproduces hbar exactly and no decay order can be measured.
inline constexpr double kExactGapFloor = 1e-11;

inline void validate_ladder(std::span<const double> ladder) {
  if (ladder.size() < 3) throw DomainError("lambda ladder must have length >= 3");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (!(ladder[k] > 0.0)) throw DomainError("lambda ladder entries must be > 0");
    if (k > 0 && !(ladder[k] < ladder[k - 1]))
      throw DomainError("lambda ladder must be strictly decreasing");
  }
}

namespace detail {
// log-log slope of gaps against lambdas, or NaN if every gap is roundoff.
inline double decay_order(std::span<const double> lambdas, std::span<const double> gaps, double hbar) {
  bool exact = true;
  std::vector<double> log_l, log_g;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    if (gaps[k] > kExactGapFloor * (1.0 + std::abs(hbar))) exact = false;
    log_l.push_back(std::log(lambdas[k]));
    log_g.push_back(std::log(std::max(gaps[k], std::numeric_limits<double>::min())));
  }
  if (exact) return std::numeric_limits<double>::quiet_NaN();
  return least_squares(log_l, log_g).slope;
}
}  // namespace detail

inline EffectiveEstimate effective_hamiltonian_detail(const HamiltonianSpec& h, double p,
                                                      std::span<const double> ladder,
                                                      const TorusGrid& grid, double tol,
                                                      int max_iter = 200,
                                                      const CellSolverOptions& opt = {}) {
  validate_ladder(ladder);
  EffectiveEstimate est;
  std::vector<double> scaled;
  for (double lam : ladder) {
    DiscountedSolution s = solve_discounted(h, p, lam, grid, tol, max_iter, opt);
    scaled.push_back(-lam * s.mean());
    est.lambdas.push_back(lam);
    est.solutions.push_back(std::move(s));
  }
  est.hbar = least_squares(est.lambdas, scaled).intercept;

  for (std::size_t k = 0; k < scaled.size(); ++k) {
    est.gaps.push_back(std::abs(est.hbar - scaled[k]));
    double worst = 0.0;
    for (double v : est.solutions[k].values) worst = std::max(worst, std::abs(est.lambdas[k] * v + est.hbar));
    est.sup_gaps.push_back(worst);
  }
  est.fit_slope = detail::decay_order(est.lambdas, est.gaps, est.hbar);
  est.source = GapSource::Mean;
  if (std::isnan(est.fit_slope)) {
    est.fit_slope = detail::decay_order(est.lambdas, est.sup_gaps, est.hbar);
    est.source = std::isnan(est.fit_slope) ? GapSource::Exact : GapSource::Pointwise;
  }
  return est;
}

struct EffectiveValue {
  double hbar;
  double fit_slope;  // NaN when every gap is at roundoff level
};

inline EffectiveValue effective_hamiltonian(const HamiltonianSpec& h, double p,
                                            std::span<const double> ladder, const TorusGrid& grid,
                                            double tol, const CellSolverOptions& opt = {}) {
  const EffectiveEstimate e = effective_hamiltonian_detail(h, p, ladder, grid, tol, 200, opt);
  return {e.hbar, e.fit_slope};
}

/// Effective Hamiltonian sampled on a p grid, interpolated piecewise
/// linearly in between. Usable wherever a PeriodicHamiltonian is expected
/// (the y argument is ignored).
class EffectiveTable {
 public:
  EffectiveTable(std::vector<double> p_grid, std::vector<double> hbar, std::vector<double> lambda_ladder,
                 std::vector<double> fit_slope)
      : p_(std::move(p_grid)), hbar_(std::move(hbar)), ladder_(std::move(lambda_ladder)),
        fit_slope_(std::move(fit_slope)) {
    if (p_.size() < 2 || p_.size() != hbar_.size() || p_.size() != fit_slope_.size())
      throw ShapeError("effective table: p_grid, hbar and fit_slope must align (>= 2 nodes)");
    for (std::size_t j = 0; j < p_.size(); ++j) {
      if (!std::isfinite(hbar_[j])) throw DomainError("effective table: non-finite hbar");
      if (j > 0 && !(p_[j] > p_[j - 1])) throw DomainError("effective table: p_grid must increase");
    }
    lip_ = 0.0;
    for (std::size_t j = 0; j + 1 < p_.size(); ++j) lip_ = std::max(lip_, std::abs(segment_slope(j)));
  }

  double eval(double /*y*/, double p) const { return hbar_[segment(p)] + segment_slope(segment(p)) * (p - p_[segment(p)]); }
  double slope(double /*y*/, double p) const { return segment_slope(segment(p)); }
  double lip_p() const noexcept { return lip_; }

  // Godunov flux of the interpolant: min over [p-, p+] if p- <= p+, max over
  // [p+, p-] otherwise. Extrema sit at an endpoint or a table node.
  FluxValue godunov(double /*y*/, double p_minus, double p_plus) const {
    const bool take_min = p_minus <= p_plus;
    auto better = [&](double v, double best) { return take_min ? v < best : v > best; };
    double best = eval(0.0, p_minus);
    int where = 0;  // 0: p_minus, 1: p_plus, 2: interior node
    if (const double v = eval(0.0, p_plus); better(v, best)) {
      best = v;
      where = 1;
    }
    const double lo = std::min(p_minus, p_plus), hi = std::max(p_minus, p_plus);
    for (auto it = std::upper_bound(p_.begin(), p_.end(), lo); it != p_.end() && *it < hi; ++it) {
      const double v = hbar_[static_cast<std::size_t>(it - p_.begin())];
      if (better(v, best)) {
        best = v;
        where = 2;
      }
    }
    FluxValue out{best, 0.0, 0.0};
    if (where == 0) out.d_minus = std::max(0.0, segment_slope(take_min ? segment(p_minus) : left_segment(p_minus)));
    if (where == 1) out.d_plus = std::min(0.0, segment_slope(take_min ? left_segment(p_plus) : segment(p_plus)));
    return out;
  }

  const std::vector<double>& p_grid() const noexcept { return p_; }
  const std::vector<double>& hbar() const noexcept { return hbar_; }
  const std::vector<double>& lambda_ladder() const noexcept { return ladder_; }
  const std::vector<double>& fit_slope() const noexcept { return fit_slope_; }

 private:
  std::size_t segment(double p) const {
    if (!(p >= p_.front() && p <= p_.back()))
      throw DomainError("effective table: slope " + std::to_string(p) + " outside p_grid [" +
                        std::to_string(p_.front()) + ", " + std::to_string(p_.back()) + "]");
    const auto it = std::upper_bound(p_.begin(), p_.end(), p);
    const std::size_t j = static_cast<std::size_t>(it - p_.begin());
    return std::min(j == 0 ? 0 : j - 1, p_.size() - 2);
  }
  // Segment ending at p (p_j < p <= p_{j+1}), clamped to the table.
  std::size_t left_segment(double p) const {
    const std::size_t j = segment(p);
    return (j > 0 && p == p_[j]) ? j - 1 : j;
  }
  double segment_slope(std::size_t j) const { return (hbar_[j + 1] - hbar_[j]) / (p_[j + 1] - p_[j]); }

  std::vector<double> p_;
  std::vector<double> hbar_;
  std::vector<double> ladder_;
  std::vector<double> fit_slope_;
  double lip_ = 0.0;
};

inline std::vector<double> uniform_p_grid(double lo, double hi, int count) {
  if (count < 2 || !(hi > lo)) throw DomainError("p grid needs count >= 2 and hi > lo");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) g[j] = lo + (hi - lo) * j / (count - 1);
  return g;
}

inline EffectiveTable build_effective_table(const HamiltonianSpec& h, std::vector<double> p_grid,
                                            std::vector<double> ladder, const TorusGrid& grid, double tol,
                                            const CellSolverOptions& opt = {}) {
  std::vector<double> hb, slopes;
  for (double p : p_grid) {
    const EffectiveValue e = effective_hamiltonian(h, p, ladder, grid, tol, opt);
    hb.push_back(e.hbar);
    slopes.push_back(e.fit_slope);
  }
  return EffectiveTable(std::move(p_grid), std::move(hb), std::move(ladder), std::move(slopes));
}

/// H-bar for H = |p| + a cos(2 pi m y): the least E >= max V with
/// int_0^1 (E - V) dy >= |p|, found by bisection on a trapezoid rule.
inline double cell_oracle_1d(const HamiltonianSpec& h, double p) {
  const auto* k = std::get_if<ham::EikonalPotential>(&h.kind());
  if (k == nullptr || !(k->amplitude > 0.0))
    throw DomainError("cell_oracle_1d requires an EikonalPotential Hamiltonian with a > 0");
  constexpr int kNodes = 10000;
  auto potential = [&](double y) { return k->amplitude * std::cos(2.0 * std::numbers::pi * k->frequency * y); };
  auto excess = [&](double e) {
    // periodic trapezoid rule over [0,1]
    double acc = 0.0;
    for (int i = 0; i < kNodes; ++i) acc += e - potential(static_cast<double>(i) / kNodes);
    return acc / kNodes;
  };
  double vmax = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kNodes; ++i) vmax = std::max(vmax, potential(static_cast<double>(i) / kNodes));
  const double target = std::abs(p);
  if (excess(vmax) >= target) return vmax;
  double lo = vmax, hi = vmax + target + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) >= target ? hi : lo) = mid;
  }
  return hi;
}

struct Lemma51Check {
  double lip_ratio = 0.0;
  double fit_slope = std::numeric_limits<double>::quiet_NaN();
  bool exact = false;  // all lambda-gaps at roundoff, rate bound holds trivially
  bool rate_ok = false;
};

/// lambda max_y |v(y,p) - v(y,q)| / |p - q| at one lambda, plus the decay
/// order of the ladder gaps at p.
inline Lemma51Check check_lemma51(const HamiltonianSpec& h, double p, double q, double lambda,
                                  std::span<const double> ladder, const TorusGrid& grid, double tol) {
  if (p == q) throw DomainError("check_lemma51: p and q must differ");
  const DiscountedSolution vp = solve_discounted(h, p, lambda, grid, tol, 200);
  const DiscountedSolution vq = solve_discounted(h, q, lambda, grid, tol, 200);
  double worst = 0.0;
  for (std::size_t i = 0; i < vp.values.size(); ++i)
    worst = std::max(worst, std::abs(vp.values[i] - vq.values[i]));
  Lemma51Check out;
  out.lip_ratio = lambda * worst / std::abs(p - q);
  const EffectiveValue e = effective_hamiltonian(h, p, ladder, grid, tol);
  out.fit_slope = e.fit_slope;
  out.exact = std::isnan(e.fit_slope);
  const bool slope_ok = out.exact || (e.fit_slope >= 0.7 && e.fit_slope <= 1.3);
  out.rate_ok = out.lip_ratio <= 4.0 * (1.0 + h.lip_p()) && slope_ok;
  return out;
}

}  // namespace tfhom
