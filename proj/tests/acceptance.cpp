// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tfhom/cell.hpp"
#include "tfhom/cli.hpp"
#include "tfhom/diagnostics.hpp"
#include "tfhom/envelopes.hpp"
#include "tfhom/fraccalc.hpp"
#include "tfhom/hamiltonian.hpp"
#include "tfhom/homogenize.hpp"
#include "tfhom/tfhj.hpp"

using namespace tfhom;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

const std::vector<double> kLadder{0.1, 0.05, 0.025, 0.0125};

Outcome caputo_identity() {
  double worst = 0.0;
  for (double a : {0.1, 0.5, 0.9}) worst = std::max(worst, caputo_identity_check(100, 20240611, FracOrder(a)).worst);
  return {worst <= 1e-10, "worst relative gap " + num(worst)};
}

Outcome power_rule() {
  bool ok = true;
  std::string d;
  for (double a : {0.3, 0.5, 0.7}) {
    const FracOrder fr(a);
    const HistoryScalar lin = HistoryScalar::sample(TimeGrid(1.0, 100, fr), [](double t) { return t; });
    const double lin_err = std::abs(caputo_l1(lin, 100) - 1.0 / fr.gamma_2ma());
    const OrderCheck oc = l1_square_order(fr);
    ok = ok && lin_err <= 1e-10 && std::abs(oc.order - (2.0 - a)) <= 0.2;
    d += "a=" + num(a) + ": linear err " + num(lin_err) + ", order " + num(oc.order) + "; ";
  }
  return {ok, d};
}

Outcome effective_vs_oracle() {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const TorusGrid grid(512);
  double worst = 0.0;
  for (double p : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0})
    worst = std::max(worst, std::abs(effective_hamiltonian(h, p, kLadder, grid, 1e-10).hbar - cell_oracle_1d(h, p)));
  return {worst <= 0.02, "max |hbar - oracle| " + num(worst)};
}

Outcome discount_rate() {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const TorusGrid grid(512);
  bool ok = true;
  std::string d;
  for (double p : {0.0, 1.0, 2.0}) {
    const EffectiveEstimate e = effective_hamiltonian_detail(h, p, kLadder, grid, 1e-10);
    ok = ok && e.fit_slope >= 0.7 && e.fit_slope <= 1.3;
    d += "p=" + num(p) + ": order " + num(e.fit_slope) + " (" + to_string(e.source) + " gap); ";
  }
  return {ok, d};
}

Outcome corrector_uniformity() {
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const std::vector<double> lips = scaled_corrector_lipschitz(h, {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}, {0.1, 0.05},
                                                              TorusGrid(512), 1e-10);
  const double lo = std::min(lips[0], lips[1]), hi = std::max(lips[0], lips[1]);
  const double spread = lo > 0.0 ? (hi - lo) / lo : (hi == 0.0 ? 0.0 : 1.0);
  return {hi <= 5.0 && spread < 0.25,
          "lambda*Lip_p = " + num(lips[0]) + ", " + num(lips[1]) + ", spread " + num(100.0 * spread) + "%"};
}

Outcome exact_fractional() {
  const FracOrder half(0.5);
  const auto h = HamiltonianSpec::eikonal_plus_constant(1.0);
  const TorusGrid grid(64);
  const SchemeParams sp = make_scheme_params(h.lip_p(), 1.0, 2000, grid, half);
  const FieldHistory u = solve(h, InitialData::zero(), std::nullopt, half, 1.0, 2000, grid, sp);
  double at_end = 0.0, all_times = 0.0;
  for (int n = 0; n <= u.n_steps(); ++n) {
    const double exact = -std::sqrt(u.time(n)) / half.gamma_1pa();
    for (double v : u.row(n)) {
      all_times = std::max(all_times, std::abs(v - exact));
      if (n == u.n_steps()) at_end = std::max(at_end, std::abs(v - exact));
    }
  }
  return {at_end <= 5e-3, "error at t=1 " + num(at_end) + " (sup over all levels " + num(all_times) + ")"};
}

Outcome barrier_and_holder() {
  const SweepConfig c;
  const FracOrder frac(*c.alpha);
  const double m_inst = c.hamiltonian.max_over_ball(c.u0.lip());
  auto run = [&](int n_steps) {
    SweepConfig s = c;
    s.n_steps = n_steps;
    return solve_oscillatory(s, 0.25);
  };
  const FieldHistory u = run(c.n_steps);
  const double literal = barrier_excess(u, m_inst);
  const double invariant = barrier_excess(u, m_inst / frac.gamma_1pa());
  const double h1 = time_holder_seminorm(u, frac.alpha());
  const double h2 = time_holder_seminorm(run(2 * c.n_steps), frac.alpha());
  const double drift = std::abs(h2 - h1) / h1;
  const bool ok = literal <= 0.05 && invariant <= 0.05 && std::isfinite(h1) && std::isfinite(h2) && drift <= 0.2;
  return {ok, "barrier excess " + num(literal) + " (M t^a), " + num(invariant) + " (M t^a / G(1+a)); Holder " +
                  num(h1) + " -> " + num(h2) + " under dt/2 (" + num(100.0 * drift) + "%)"};
}

Outcome comparison() {
  const FracOrder half(0.5);
  const auto h = HamiltonianSpec::eikonal_potential(1.0, 1);
  const TorusGrid grid(256);
  SchemeParams sp = make_scheme_params(h.lip_p(), 1.0, 400, grid, half);
  sp.flux = FluxKind::Godunov;
  const int nc = grid.n_cells();
  std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
  const InitialData cosine = InitialData::cosine(0.25, 1), hat = InitialData::hat(0.5, 0.25);
  {
    std::vector<double> a(nc), b(nc);
    for (int i = 0; i < nc; ++i) b[i] = cosine(grid.node(i)), a[i] = b[i] - 0.1;
    pairs.emplace_back(a, b);
  }
  {
    std::vector<double> a(nc), b(nc);
    for (int i = 0; i < nc; ++i) a[i] = cosine(grid.node(i)) - 0.3, b[i] = hat(grid.node(i));
    pairs.emplace_back(a, b);
  }
  {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 0.2);
    std::vector<double> a(nc), b(nc);
    for (int i = 0; i < nc; ++i) a[i] = InitialData::cosine(0.3, 2)(grid.node(i)), b[i] = a[i] + u(rng);
    pairs.emplace_back(a, b);
  }
  double worst = -1e300;
  for (const auto& [a, b] : pairs) {
    const FieldHistory ua = solve_from(h, a, 0.25, half, 1.0, 400, grid, sp);
    const FieldHistory ub = solve_from(h, b, 0.25, half, 1.0, 400, grid, sp);
    worst = std::max(worst, comparison_check(ua, ub));
  }
  return {worst <= 1e-12, "max (u_a - u_b) over three pairs " + num(worst)};
}

Outcome sup_convolution() {
  const HistoryScalar f =
      HistoryScalar::sample(TimeGrid(1.0, 1999, FracOrder(0.5)), [](double t) { return std::sqrt(t); });
  bool ok = true;
  std::string d;
  for (double delta : {0.1, 0.01, 0.001}) {
    const Lemma36Report r = check_lemma36(f, delta, 1.0, 0.5);
    ok = ok && r.all_ok();
    d += "delta=" + num(delta) + ": " + (r.all_ok() ? "5/5" : "not all") + ", dist " + num(r.distance.measured) +
         " <= " + num(r.distance.bound) + "; ";
  }
  return {ok, d};
}

std::string ladder_text(const RateReport& r) {
  std::string s;
  for (double e : r.errors) s += num(e) + " ";
  return s;
}

Outcome fractional_rate() {
  const RateReport r = run_sweep(SweepConfig{});
  if (!r.failure.empty()) return {false, "sweep aborted: " + r.failure};
  const double order = r.fitted_order.value_or(std::nan(""));
  const bool ok = r.pass && r.strictly_decreasing && order >= theorem_exponent(0.5) - 0.02 && order >= 1.0 / 6.0 - 0.02;
  return {ok, "errors " + ladder_text(r) + "; fitted order " + num(order) + " vs " + num(theorem_exponent(0.5))};
}

Outcome classical_rate() {
  SweepConfig c;
  c.alpha.reset();
  const RateReport r = run_sweep(c);
  if (!r.failure.empty()) return {false, "sweep aborted: " + r.failure};
  const double order = r.fitted_order.value_or(std::nan(""));
  return {order >= 1.0 / 3.0 - 0.05, "errors " + ladder_text(r) + "; fitted order " + num(order)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "tfhom_acceptance_determinism";
  fs::remove_all(root);
  std::ostringstream sink;
  for (const char* run : {"a", "b"}) {
    const cli::RunConfig c = cli::parse_config(std::nullopt, {}, "homogenize", (root / run).string());
    const int code = cli::run(c, sink, sink);
    if (code == cli::kExitOperational) return {false, "homogenize run failed: " + sink.str()};
  }
  const std::string a = slurp(root / "a" / "rate_report.json"), b = slurp(root / "b" / "rate_report.json");
  return {!a.empty() && a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"caputo J+K identity", caputo_identity},
      {"power-rule oracle", power_rule},
      {"effective Hamiltonian vs oracle", effective_vs_oracle},
      {"discount rate of lambda mean(v)", discount_rate},
      {"scaled corrector Lipschitz uniformity", corrector_uniformity},
      {"exact fractional solution", exact_fractional},
      {"discrete barrier and time Holder", barrier_and_holder},
      {"comparison monotonicity", comparison},
      {"sup-convolution estimates", sup_convolution},
      {"homogenization rate (alpha = 1/2)", fractional_rate},
      {"classical baseline rate", classical_rate},
      {"determinism of rate_report.json", determinism}};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %2zu  %-38s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
