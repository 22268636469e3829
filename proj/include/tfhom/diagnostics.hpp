#pragma once

// Reusable numerical checks shared by the CLI and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tfhom/cell.hpp"
#include "tfhom/fraccalc.hpp"
#include "tfhom/hamiltonian.hpp"

namespace tfhom {

/// Random piecewise-linear history on [0, 1]: a scaled random walk with
/// between 2 and `max_steps` segments.
inline HistoryScalar random_history(std::mt19937_64& rng, const FracOrder& frac, int max_steps = 400) {
  std::uniform_int_distribution<int> steps(2, max_steps);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const TimeGrid g(1.0, steps(rng), frac);
  const double scale = std::pow(10.0, 2.0 * unit(rng));
  std::vector<double> s(static_cast<std::size_t>(g.n_steps()) + 1);
  s[0] = scale * unit(rng);
  for (std::size_t k = 1; k < s.size(); ++k) s[k] = s[k - 1] + scale * unit(rng);
  return HistoryScalar(g, std::move(s));
}

struct IdentityCheck {
  int trials = 0;
  double worst = 0.0;  // max |J + K_head + K_tail - L1| / (1 + max|f|)
};

/// Compare the J + K splitting with the L1 quadrature at the last node,
/// for splits r = 0.1, 0.5, 0.9 of t_n.
inline IdentityCheck caputo_identity_check(int trials, std::uint64_t seed, const FracOrder& frac) {
  std::mt19937_64 rng(seed);
  IdentityCheck out;
  out.trials = trials;
  for (int k = 0; k < trials; ++k) {
    const HistoryScalar f = random_history(rng, frac);
    const int n = f.last_index();
    const double l1 = caputo_l1(f, n);
    double fmax = 0.0;
    for (double v : f.samples) fmax = std::max(fmax, std::abs(v));
    for (double frac_r : {0.1, 0.5, 0.9}) {
      const CaputoSplit s = caputo_jk(f, n, frac_r * f.grid.time(n));
      out.worst = std::max(out.worst, std::abs(s.sum() - l1) / (1.0 + fmax));
    }
  }
  return out;
}

struct OrderCheck {
  std::vector<double> dts;
  std::vector<double> errors;
  double order = 0.0;  // slope of log error against log dt
};

/// L1 error of d^a t^2 at t = 1 over dt = 1/100 .. 1/1600.
inline OrderCheck l1_square_order(const FracOrder& frac) {
  OrderCheck out;
  const double exact = caputo_power_oracle(2.0, frac, 1.0);
  std::vector<double> ldt, lerr;
  for (int n : {100, 200, 400, 800, 1600}) {
    const HistoryScalar f = HistoryScalar::sample(TimeGrid(1.0, n, frac), [](double t) { return t * t; });
    const double err = std::abs(caputo_l1(f, n) - exact);
    out.dts.push_back(1.0 / n);
    out.errors.push_back(err);
    ldt.push_back(std::log(1.0 / n));
    lerr.push_back(std::log(err));
  }
  out.order = least_squares(ldt, lerr).slope;
  return out;
}

/// lambda * max over pairs of max_y |v(y,p) - v(y,q)| / |p - q| on a set of
/// slopes, one value per lambda.
inline std::vector<double> scaled_corrector_lipschitz(const HamiltonianSpec& h, const std::vector<double>& ps,
                                                      const std::vector<double>& lambdas, const TorusGrid& grid,
                                                      double tol) {
  if (ps.size() < 2) throw DomainError("corrector Lipschitz check needs at least two slopes");
  std::vector<double> out;
  for (double lam : lambdas) {
    std::vector<DiscountedSolution> sols;
    for (double p : ps) sols.push_back(solve_discounted(h, p, lam, grid, tol, 200));
    double best = 0.0;
    for (std::size_t a = 0; a < ps.size(); ++a)
      for (std::size_t b = a + 1; b < ps.size(); ++b) {
        if (ps[a] == ps[b]) continue;
        double d = 0.0;
        for (std::size_t i = 0; i < sols[a].values.size(); ++i)
          d = std::max(d, std::abs(sols[a].values[i] - sols[b].values[i]));
        best = std::max(best, d / std::abs(ps[a] - ps[b]));
      }
    out.push_back(lam * best);
  }
  return out;
}

}  // namespace tfhom
