#ifndef BPDG_PHYSICS_HPP_
#define BPDG_PHYSICS_HPP_

// Scalar advection, Burgers and compressible Euler in 2D: fluxes, wave
// speeds, invariant regions and the global Lax-Friedrichs flux.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bpdg/errors.hpp"

namespace bpdg {

/// Scalar interval [lo, hi].
struct BoxRegion {
  double lo{-1.0};
  double hi{1.0};

  BoxRegion() = default;
  BoxRegion(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi)) throw std::invalid_argument("BoxRegion: need lo < hi");
  }
};

/// {rho > 0, p > 0}; the limiter targets the floors eps_rho and eps_p.
struct PositivityRegion {
  double eps_rho{1e-13};
  double eps_p{1e-13};
};

inline bool in_region(const BoxRegion &g, double u) { return g.lo <= u && u <= g.hi; }

struct LinearAdvection {
  static constexpr int kComponents = 1;
  using State = std::array<double, 1>;
  using Region = BoxRegion;

  double cx{1.0};
  double cy{1.0};
  Region region{-1.0, 1.0};

  static std::string name() { return "advection2d"; }
  State flux(const State &u, int axis) const {
    return {(axis == 0 ? cx : cy) * u[0]};
  }
  double max_wave_speed(const State &, int axis) const {
    return std::fabs(axis == 0 ? cx : cy);
  }
  bool admissible(const State &u) const { return std::isfinite(u[0]); }
  bool in_region(const State &u) const { return bpdg::in_region(region, u[0]); }
};

struct Burgers {
  static constexpr int kComponents = 1;
  using State = std::array<double, 1>;
  using Region = BoxRegion;

  Region region{-1.0, 0.8};

  static std::string name() { return "burgers2d"; }
  State flux(const State &u, int) const { return {0.5 * u[0] * u[0]}; }
  double max_wave_speed(const State &u, int) const { return std::fabs(u[0]); }
  bool admissible(const State &u) const { return std::isfinite(u[0]); }
  bool in_region(const State &u) const { return bpdg::in_region(region, u[0]); }
};

/// Pressure (gamma - 1)(E - |m|^2 / (2 rho)). Throws for rho <= 0.
template <typename S>
double euler_pressure(const S &u, double gamma) {
  if (!(u[0] > 0.0))
    throw AdmissibilityError("euler_pressure: non-positive density " +
                             std::to_string(u[0]));
  return (gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0]);
}

struct Euler {
  static constexpr int kComponents = 4;
  using State = std::array<double, 4>;
  using Region = PositivityRegion;

  double gamma{5.0 / 3.0};
  Region region{};

  static std::string name() { return "euler2d"; }

  State from_primitive(double rho, double v1, double v2, double p) const {
    return {rho, rho * v1, rho * v2,
            p / (gamma - 1.0) + 0.5 * rho * (v1 * v1 + v2 * v2)};
  }

  double pressure(const State &u) const {
    return (gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0]);
  }

  State flux(const State &u, int axis) const {
    const double p = pressure(u);
    const double v = u[1 + axis] / u[0];
    State f{u[1 + axis], u[1] * v, u[2] * v, (u[3] + p) * v};
    f[1 + axis] += p;
    return f;
  }

  double max_wave_speed(const State &u, int axis) const {
    const double p = euler_pressure(u, gamma);
    if (!(p >= 0.0))
      throw AdmissibilityError("euler: negative pressure " + std::to_string(p));
    return std::fabs(u[1 + axis] / u[0]) + std::sqrt(gamma * p / u[0]);
  }

  bool admissible(const State &u) const {
    for (double c : u)
      if (!std::isfinite(c)) return false;
    return u[0] > 0.0 && pressure(u) > 0.0;
  }
  /// Membership in the floored set {rho >= eps_rho, p >= eps_p}.
  bool in_region(const State &u) const {
    return admissible(u) && u[0] >= region.eps_rho && pressure(u) >= region.eps_p;
  }
};

/// Global Lax-Friedrichs flux 1/2 (f(uL) + f(uR)) - alpha/2 (uR - uL).
template <typename Model>
typename Model::State lax_friedrichs_flux(const Model &model,
                                          const typename Model::State &ul,
                                          const typename Model::State &ur,
                                          int axis, double alpha) {
  const auto fl = model.flux(ul, axis);
  const auto fr = model.flux(ur, axis);
  typename Model::State out{};
  for (int c = 0; c < Model::kComponents; ++c)
    out[c] = 0.5 * (fl[c] + fr[c]) - 0.5 * alpha * (ur[c] - ul[c]);
  return out;
}

}  // namespace bpdg

#endif  // BPDG_PHYSICS_HPP_
