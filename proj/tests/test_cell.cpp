#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tfhom/cell.hpp"
#include "tfhom/diagnostics.hpp"
#include "tfhom/monotone.hpp"

using namespace tfhom;

namespace {
const std::vector<double> kLadder{0.1, 0.05, 0.025, 0.0125};
}

TEST(CyclicTridiagonal, SolvesRandomDominantSystems) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {3, 4, 17, 256}) {
    std::vector<double> lo(n), di(n), up(n), rhs(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = u(rng);
      up[i] = u(rng);
      di[i] = 2.5 + std::abs(u(rng));
      rhs[i] = u(rng);
    }
    const auto x = solve_cyclic_tridiagonal(lo, di, up, rhs);
    for (int i = 0; i < n; ++i) {
      const double r = lo[i] * x[(i + n - 1) % n] + di[i] * x[i] + up[i] * x[(i + 1) % n] - rhs[i];
      EXPECT_NEAR(r, 0.0, 1e-13);
    }
  }
  std::vector<double> a(2, 1.0);
  EXPECT_THROW(solve_cyclic_tridiagonal(a, a, a, a), ShapeError);
}

TEST(TorusGrid, Basics) {
  EXPECT_THROW(TorusGrid(15), DomainError);
  const TorusGrid g(16);
  EXPECT_DOUBLE_EQ(g.dy(), 1.0 / 16);
  EXPECT_EQ(g.wrap(-1), 15);
  EXPECT_EQ(g.wrap(16), 0);
  EXPECT_DOUBLE_EQ(g.node(17), 1.0 / 16);
  EXPECT_DOUBLE_EQ(g.distance(1, 15), 2.0 / 16);
  EXPECT_DOUBLE_EQ(g.distance(0, 8), 0.5);
}

TEST(SolveDiscounted, YIndependentIsConstant) {
  const auto h = HamiltonianSpec::eikonal();
  for (double p : {-1.5, 0.0, 2.0}) {
    const DiscountedSolution s = solve_discounted(h, p, 0.1, TorusGrid(64), 1e-12, 50);
    for (double v : s.values) EXPECT_NEAR(v, -std::abs(p) / 0.1, 1e-10);
    EXPECT_LE(s.residual_inf, 1e-12);
  }
}

TEST(SolveDiscounted, EikonalPotentialMeanAndOscillation) {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const DiscountedSolution s = solve_discounted(h, 0.0, 0.05, TorusGrid(256), 1e-10, 200);
  EXPECT_GE(0.05 * s.mean(), -1.05);
  EXPECT_LE(0.05 * s.mean(), -0.95);
  EXPECT_LE(s.oscillation(), 40.0);
  EXPECT_LE(0.05 * s.oscillation(), 4.0 * h.lip_y());
}

TEST(SolveDiscounted, ResidualAtAcceptance) {
  const auto h = HamiltonianSpec::eikonal_potential(0.8, 2);
  const TorusGrid g(128);
  const DiscountedSolution s = solve_discounted(h, 0.4, 0.05, g, 1e-11, 200);
  MonotoneSystem<HamiltonianSpec> sys{NumericalFlux<HamiltonianSpec>{&h, h.lip_p()}, g.nodes(), g.dy(), 0.4, 0.05, 1.0, {}};
  std::vector<double> r(s.values.size());
  sys.residual(s.values, r);
  for (double x : r) EXPECT_LE(std::abs(x), 1e-11);
}

TEST(SolveDiscounted, PseudoTimeAgreesWithNewton) {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const TorusGrid g(32);
  CellSolverOptions relax;
  relax.method = MonotoneMethod::Relaxation;
  const DiscountedSolution a = solve_discounted(h, 0.5, 0.5, g, 1e-10, 200);
  const DiscountedSolution b = solve_discounted(h, 0.5, 0.5, g, 1e-10, 200000, relax);
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-8);
}

TEST(SolveDiscounted, Errors) {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  EXPECT_THROW(solve_discounted(h, 0.0, 0.0, TorusGrid(32), 1e-10, 10), DomainError);
  EXPECT_THROW(solve_discounted(h, 0.0, 0.1, TorusGrid(32), 0.0, 10), DomainError);
  CellSolverOptions relax;
  relax.method = MonotoneMethod::Relaxation;
  try {
    solve_discounted(h, 0.0, 0.01, TorusGrid(256), 1e-12, 3, relax);
    FAIL() << "expected non-convergence";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.residual(), 1e-12);
  }
}

TEST(SolveDiscounted, ComparisonInRhsShift) {
  // A larger discount pushes v toward zero from below: ordered solutions.
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const TorusGrid g(64);
  const auto a = solve_discounted(h, 0.3, 0.1, g, 1e-11, 200);
  const auto b = solve_discounted(h, 0.3, 0.2, g, 1e-11, 200);
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_LE(a.values[i], b.values[i]);
}

TEST(EffectiveHamiltonian, YIndependentExact) {
  const EffectiveValue e = effective_hamiltonian(HamiltonianSpec::eikonal(), 1.5, kLadder, TorusGrid(64), 1e-12);
  EXPECT_NEAR(e.hbar, 1.5, 1e-6);
  EXPECT_TRUE(std::isnan(e.fit_slope));
}

TEST(EffectiveHamiltonian, MatchesOracleAndDecaysLinearly) {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const TorusGrid g(512);
  for (double p : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
    const EffectiveEstimate e = effective_hamiltonian_detail(h, p, kLadder, g, 1e-10);
    EXPECT_NEAR(e.hbar, cell_oracle_1d(h, p), 0.02) << p;
    EXPECT_NEAR(e.hbar, std::max(1.0, std::abs(p)), 0.02) << p;
    ASSERT_FALSE(std::isnan(e.fit_slope)) << p;
    EXPECT_GE(e.fit_slope, 0.7) << p;
    EXPECT_LE(e.fit_slope, 1.3) << p;
  }
}

TEST(EffectiveHamiltonian, MeanGapVanishesOffTheFlatPiece) {
  // For |p| >= max V the discrete fluxes sum to N |p| exactly; the decay
  // order is then read from the pointwise gap.
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const EffectiveEstimate e = effective_hamiltonian_detail(h, 2.0, kLadder, TorusGrid(256), 1e-10);
  EXPECT_EQ(e.source, GapSource::Pointwise);
  for (double gap : e.gaps) EXPECT_LE(gap, 1e-12);
  for (std::size_t k = 1; k < e.sup_gaps.size(); ++k) EXPECT_LT(e.sup_gaps[k], e.sup_gaps[k - 1]);
  const EffectiveEstimate f = effective_hamiltonian_detail(h, 0.0, kLadder, TorusGrid(256), 1e-10);
  EXPECT_EQ(f.source, GapSource::Mean);
}

TEST(EffectiveHamiltonian, EvenHamiltonianIsSymmetric) {
  const auto h = HamiltonianSpec::eikonal_potential(0.6, 2);
  const TorusGrid g(256);
  for (double p : {0.3, 0.7, 1.4}) {
    const double a = effective_hamiltonian(h, p, kLadder, g, 1e-10).hbar;
    const double b = effective_hamiltonian(h, -p, kLadder, g, 1e-10).hbar;
    EXPECT_NEAR(a, b, 1e-3);
  }
}

TEST(EffectiveHamiltonian, LadderValidation) {
  const auto h = HamiltonianSpec::eikonal();
  const TorusGrid g(32);
  EXPECT_THROW(effective_hamiltonian(h, 0.0, std::vector<double>{0.1, 0.05}, g, 1e-10), DomainError);
  EXPECT_THROW(effective_hamiltonian(h, 0.0, std::vector<double>{0.1, 0.1, 0.05}, g, 1e-10), DomainError);
  EXPECT_THROW(effective_hamiltonian(h, 0.0, std::vector<double>{0.1, 0.05, -0.01}, g, 1e-10), DomainError);
}

TEST(CellOracle, Values) {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  EXPECT_NEAR(cell_oracle_1d(h, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(cell_oracle_1d(h, 3.0), 3.0, 1e-9);
  EXPECT_NEAR(cell_oracle_1d(h, -0.4), 1.0, 1e-12);
  EXPECT_NEAR(cell_oracle_1d(HamiltonianSpec::eikonal_potential(1e-9, 1), 0.7), 0.7, 1e-6);
  EXPECT_THROW(cell_oracle_1d(HamiltonianSpec::eikonal(), 0.0), DomainError);
  EXPECT_THROW(cell_oracle_1d(HamiltonianSpec::eikonal_potential(-1.0, 1), 0.0), DomainError);
}

TEST(EffectiveTable, InterpolationAndRange) {
  const EffectiveTable t({-1.0, 0.0, 2.0}, {1.0, 0.5, 2.5}, kLadder, {1.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(t.eval(0.0, -0.5), 0.75);
  EXPECT_DOUBLE_EQ(t.eval(0.0, 1.0), 1.5);
  EXPECT_DOUBLE_EQ(t.eval(0.0, 2.0), 2.5);
  EXPECT_DOUBLE_EQ(t.lip_p(), 1.0);
  EXPECT_THROW(t.eval(0.0, 2.01), DomainError);
  EXPECT_THROW(t.eval(0.0, -1.5), DomainError);
  EXPECT_THROW(EffectiveTable({0.0, 1.0}, {0.0}, kLadder, {1.0}), ShapeError);
  EXPECT_THROW(EffectiveTable({0.0, 0.0}, {0.0, 1.0}, kLadder, {1.0, 1.0}), DomainError);
  EXPECT_THROW(EffectiveTable({0.0, 1.0}, {0.0, NAN}, kLadder, {1.0, 1.0}), DomainError);
}

TEST(EffectiveTable, GodunovMatchesEikonalAndIsMonotone) {
  std::vector<double> ps = uniform_p_grid(-4.0, 4.0, 33), hb;
  for (double p : ps) hb.push_back(std::abs(p));
  const EffectiveTable t(ps, hb, kLadder, std::vector<double>(ps.size(), NAN));
  const auto e = HamiltonianSpec::eikonal();
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> p(-3.5, 3.5), bump(0.0, 0.4);
  for (int k = 0; k < 10000; ++k) {
    const double pm = p(rng), pp = p(rng), d = bump(rng);
    EXPECT_NEAR(t.godunov(0.0, pm, pp).value, godunov_eikonal(e, 0.0, pm, pp), 1e-14);
    EXPECT_GE(t.godunov(0.0, pm + d, pp).value, t.godunov(0.0, pm, pp).value);
    EXPECT_LE(t.godunov(0.0, pm, pp + d).value, t.godunov(0.0, pm, pp).value);
    const FluxValue fv = t.godunov(0.0, pm, pp);
    EXPECT_GE(fv.d_minus, 0.0);
    EXPECT_LE(fv.d_plus, 0.0);
  }
}

TEST(EffectiveTable, BuiltTableIsLipschitz) {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const EffectiveTable t = build_effective_table(h, uniform_p_grid(-4.0, 4.0, 33), kLadder, TorusGrid(256), 1e-10);
  for (std::size_t j = 0; j + 1 < t.p_grid().size(); ++j)
    EXPECT_LE(std::abs(t.hbar()[j + 1] - t.hbar()[j]), (h.lip_p() + 0.1) * (t.p_grid()[j + 1] - t.p_grid()[j]));
  EXPECT_THROW(uniform_p_grid(1.0, 1.0, 5), DomainError);
  EXPECT_THROW(uniform_p_grid(0.0, 1.0, 1), DomainError);
}

TEST(Lemma51, EikonalPairRatioIsOne) {
  const Lemma51Check c = check_lemma51(HamiltonianSpec::eikonal(), 1.0, 2.0, 0.1, kLadder, TorusGrid(64), 1e-12);
  EXPECT_NEAR(c.lip_ratio, 1.0, 1e-9);
  EXPECT_TRUE(c.exact);
  EXPECT_TRUE(c.rate_ok);
}

TEST(Lemma51, PotentialPairBounded) {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const TorusGrid g(256);
  for (double lam : {0.1, 0.05}) {
    const Lemma51Check c = check_lemma51(h, 0.0, 0.5, lam, kLadder, g, 1e-10);
    EXPECT_LE(c.lip_ratio, 5.0);
    EXPECT_TRUE(c.rate_ok);
  }
}

TEST(Lemma51, NearlyEqualSlopes) {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  EXPECT_THROW(check_lemma51(h, 0.3, 0.3, 0.1, kLadder, TorusGrid(64), 1e-10), DomainError);
  const Lemma51Check c = check_lemma51(h, 0.3 + 1e-9, 0.3, 0.1, kLadder, TorusGrid(64), 1e-10);
  EXPECT_GE(c.lip_ratio, 0.0);
  EXPECT_LE(c.lip_ratio, 5.0);
}

TEST(Lemma51, ScaledCorrectorLipschitzUniform) {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const std::vector<double> lips =
      scaled_corrector_lipschitz(h, {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}, {0.1, 0.05}, TorusGrid(256), 1e-10);
  ASSERT_EQ(lips.size(), 2u);
  for (double l : lips) EXPECT_LE(l, 5.0);
  EXPECT_LT(std::abs(lips[0] - lips[1]) / std::min(lips[0], lips[1]), 0.25);
}

TEST(LeastSquares, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LineFit f = least_squares(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_THROW(least_squares(std::vector<double>{1.0}, std::vector<double>{1.0}), DomainError);
  EXPECT_THROW(least_squares(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}), DomainError);
}
