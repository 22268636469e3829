#pragma once

// Periodic coercive Hamiltonians H(y, p) on the unit cell and the monotone
// numerical Hamiltonians used by the finite-difference solvers (N = 1).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <variant>

#include "tfhom/errors.hpp"
#include "tfhom/fraccalc.hpp"

namespace tfhom {

namespace ham {
struct Eikonal {};  // |p|
struct EikonalPotential {  // |p| + a cos(2 pi m y)
  double amplitude = 1.0;
  int frequency = 1;
};
struct EikonalPlusConstant {  // |p| + c0
  double c0 = 0.0;
};
struct Custom {
  std::function<double(double, double)> fn;
  std::string name = "custom";
};
}  // namespace ham

/// Declared regularity constants: Lipschitz in y and p, and the linear
/// coercivity bound H(y,p) >= c_low |p| - c_off.
struct HamiltonianConstants {
  double lip_y = 0.0;
  double lip_p = 0.0;
  double c_low = 0.0;
  double c_off = 0.0;
};

/// Numerical Hamiltonian value plus its partials in the one-sided slopes.
struct FluxValue {
  double value;
  double d_minus;  // >= 0 for a monotone flux
  double d_plus;   // <= 0 for a monotone flux
};

class HamiltonianSpec {
 public:
  using Kind = std::variant<ham::Eikonal, ham::EikonalPotential, ham::EikonalPlusConstant, ham::Custom>;

  static HamiltonianSpec eikonal() { return HamiltonianSpec(ham::Eikonal{}, {0.0, 1.0, 1.0, 0.0}); }

  static HamiltonianSpec eikonal_potential(double amplitude, int frequency) {
    const double lip_y = 2.0 * std::numbers::pi * frequency * std::abs(amplitude);
    return HamiltonianSpec(ham::EikonalPotential{amplitude, frequency},
                           {lip_y, 1.0, 1.0, std::abs(amplitude)});
  }

  static HamiltonianSpec eikonal_plus_constant(double c0) {
    return HamiltonianSpec(ham::EikonalPlusConstant{c0}, {0.0, 1.0, 1.0, std::max(0.0, -c0)});
  }

  // The caller vouches for periodicity and the declared constants; the
  // property tests in this repository sample them.
  static HamiltonianSpec custom(std::function<double(double, double)> fn,
                                HamiltonianConstants constants, std::string name = "custom") {
    return HamiltonianSpec(ham::Custom{std::move(fn), std::move(name)}, constants);
  }

  double eval(double y, double p) const {
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, ham::Eikonal>) {
            return std::abs(p);
          } else if constexpr (std::is_same_v<K, ham::EikonalPotential>) {
            return std::abs(p) + k.amplitude * std::cos(2.0 * std::numbers::pi * k.frequency * y);
          } else if constexpr (std::is_same_v<K, ham::EikonalPlusConstant>) {
            return std::abs(p) + k.c0;
          } else {
            return k.fn(y, p);
          }
        },
        kind_);
  }

  // Generalized derivative in p; the Newton solvers only need an element of
  // the Clarke subdifferential. Custom Hamiltonians fall back to central
  // differences.
  double slope(double y, double p) const {
    if (std::holds_alternative<ham::Custom>(kind_)) {
      const double h = 1e-6 * std::max(1.0, std::abs(p));
      return (eval(y, p + h) - eval(y, p - h)) / (2.0 * h);
    }
    return p > 0.0 ? 1.0 : (p < 0.0 ? -1.0 : 0.0);
  }

  // True when H(y,p) = |p| + g(y); the Godunov flux is only defined then.
  bool is_eikonal_type() const noexcept { return !std::holds_alternative<ham::Custom>(kind_); }

  /// g(y) in H = |p| + g(y). Throws for Custom Hamiltonians.
  double potential(double y) const {
    if (!is_eikonal_type()) throw DomainError("potential(): Hamiltonian is not of eikonal type");
    return eval(y, 0.0);
  }

  /// Maximum of H over the cell and |p| <= p_max.
  double max_over_ball(double p_max, int samples = 4096) const {
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, ham::Eikonal>) {
            return p_max;
          } else if constexpr (std::is_same_v<K, ham::EikonalPotential>) {
            return p_max + std::abs(k.amplitude);
          } else if constexpr (std::is_same_v<K, ham::EikonalPlusConstant>) {
            return p_max + k.c0;
          } else {
            double best = -std::numeric_limits<double>::infinity();
            const int np = 64;
            for (int i = 0; i < samples; ++i) {
              const double y = static_cast<double>(i) / samples;
              for (int j = 0; j <= np; ++j) {
                const double p = -p_max + 2.0 * p_max * j / np;
                best = std::max(best, k.fn(y, p));
              }
            }
            return best;
          }
        },
        kind_);
  }

  // Defined after the class; eikonal-type Hamiltonians only.
  FluxValue godunov(double y, double p_minus, double p_plus) const;

  const Kind& kind() const noexcept { return kind_; }
  const HamiltonianConstants& constants() const noexcept { return constants_; }
  double lip_y() const noexcept { return constants_.lip_y; }
  double lip_p() const noexcept { return constants_.lip_p; }

  std::string name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, ham::Eikonal>) return "eikonal";
          else if constexpr (std::is_same_v<K, ham::EikonalPotential>) return "eikonal_potential";
          else if constexpr (std::is_same_v<K, ham::EikonalPlusConstant>) return "eikonal_plus_constant";
          else return k.name;
        },
        kind_);
  }

  /// True when H does not depend on y, in which case the effective
  /// Hamiltonian equals H itself.
  bool y_independent() const noexcept {
    if (std::holds_alternative<ham::Eikonal>(kind_) ||
        std::holds_alternative<ham::EikonalPlusConstant>(kind_))
      return true;
    if (const auto* k = std::get_if<ham::EikonalPotential>(&kind_)) return k->amplitude == 0.0;
    return false;
  }

 private:
  HamiltonianSpec(Kind k, HamiltonianConstants c) : kind_(std::move(k)), constants_(c) {}

  Kind kind_;
  HamiltonianConstants constants_;
};

/// Anything the flux layer can evaluate: H(y,p), a generalized p-derivative,
/// and a p-Lipschitz bound used to size the artificial viscosity.
template <class H>
concept PeriodicHamiltonian = requires(const H& h, double y, double p) {
  { h.eval(y, p) } -> std::convertible_to<double>;
  { h.slope(y, p) } -> std::convertible_to<double>;
  { h.lip_p() } -> std::convertible_to<double>;
};

/// Lax-Friedrichs numerical Hamiltonian; monotone whenever theta >= lip_p.
template <PeriodicHamiltonian H>
FluxValue lax_friedrichs_flux(const H& h, double y, double p_minus, double p_plus, double theta) {
  const double mid = 0.5 * (p_minus + p_plus);
  const double hp = h.slope(y, mid);
  return {h.eval(y, mid) - 0.5 * theta * (p_plus - p_minus), 0.5 * (hp + theta), 0.5 * (hp - theta)};
}

inline double lax_friedrichs(const HamiltonianSpec& h, double y, double p_minus, double p_plus,
                             double theta_lf) {
  if (theta_lf < h.lip_p())
    throw ConfigError("lax_friedrichs: theta_lf = " + std::to_string(theta_lf) +
                      " is below lip_p = " + std::to_string(h.lip_p()));
  return lax_friedrichs_flux(h, y, p_minus, p_plus, theta_lf).value;
}

/// Godunov flux for H = |p| + g(y): max(p_minus^+, -p_plus^-) + g(y).
inline FluxValue godunov_eikonal_flux(const HamiltonianSpec& h, double y, double p_minus,
                                      double p_plus) {
  const double left = std::max(p_minus, 0.0);
  const double right = std::max(-p_plus, 0.0);
  const double g = h.potential(y);
  if (left >= right) return {left + g, left > 0.0 ? 1.0 : 0.0, 0.0};
  return {right + g, 0.0, -1.0};
}

inline FluxValue HamiltonianSpec::godunov(double y, double p_minus, double p_plus) const {
  return godunov_eikonal_flux(*this, y, p_minus, p_plus);
}

inline double godunov_eikonal(const HamiltonianSpec& h, double y, double p_minus, double p_plus) {
  return godunov_eikonal_flux(h, y, p_minus, p_plus).value;
}

enum class FluxKind { LaxFriedrichs, Godunov };

template <class H>
concept HasGodunovFlux = requires(const H& h, double y, double a, double b) {
  { h.godunov(y, a, b) } -> std::same_as<FluxValue>;
};

/// Monotone flux selector bound to a Hamiltonian.
template <PeriodicHamiltonian H>
struct NumericalFlux {
  const H* ham;
  double theta;
  FluxKind kind = FluxKind::LaxFriedrichs;

  FluxValue operator()(double y, double p_minus, double p_plus) const {
    if (kind == FluxKind::Godunov) {
      if constexpr (HasGodunovFlux<H>) {
        return ham->godunov(y, p_minus, p_plus);
      } else {
        throw ConfigError("Godunov flux is not available for this Hamiltonian");
      }
    }
    return lax_friedrichs_flux(*ham, y, p_minus, p_plus, theta);
  }
};

/// Initial data u0 on the period-1 torus.
struct InitialData {
  enum class Kind { Zero, Cosine, Hat };
  Kind kind = Kind::Zero;
  double amplitude = 0.0;
  int frequency = 1;       // Cosine
  double half_width = 0.25;  // Hat, centred at x = 1/2

  static InitialData zero() { return {}; }
  static InitialData cosine(double amplitude, int frequency) {
    return {Kind::Cosine, amplitude, frequency, 0.25};
  }
  static InitialData hat(double amplitude, double half_width) {
    if (!(half_width > 0.0 && half_width <= 0.5)) throw DomainError("hat half_width must lie in (0, 1/2]");
    return {Kind::Hat, amplitude, 1, half_width};
  }

  double operator()(double x) const {
    switch (kind) {
      case Kind::Zero:
        return 0.0;
      case Kind::Cosine:
        return amplitude * std::cos(2.0 * std::numbers::pi * frequency * x);
      case Kind::Hat: {
        const double xr = x - std::floor(x);
        return amplitude * std::max(0.0, 1.0 - std::abs(xr - 0.5) / half_width);
      }
    }
    return 0.0;
  }

  double lip() const {
    switch (kind) {
      case Kind::Zero:
        return 0.0;
      case Kind::Cosine:
        return 2.0 * std::numbers::pi * frequency * std::abs(amplitude);
      case Kind::Hat:
        return std::abs(amplitude) / half_width;
    }
    return 0.0;
  }

  double sup_norm() const { return kind == Kind::Zero ? 0.0 : std::abs(amplitude); }

  std::string name() const {
    switch (kind) {
      case Kind::Zero: return "zero";
      case Kind::Cosine: return "cosine";
      case Kind::Hat: return "hat";
    }
    return "?";
  }
};

/// M = max{ H(y,p) : |p| <= Lip u0 } / G(1-a), the barrier constant.
inline double barrier_constant(const HamiltonianSpec& h, const InitialData& u0, const FracOrder& frac) {
  return h.max_over_ball(u0.lip()) / frac.gamma_1ma();
}

}  // namespace tfhom
