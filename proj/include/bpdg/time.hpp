#ifndef BPDG_TIME_HPP_
#define BPDG_TIME_HPP_

// SSP Runge-Kutta schemes in Shu-Osher form and the time-step policies.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpdg/decomposition.hpp"

namespace bpdg {

enum class SspScheme { kSsprk3, kSsprk4 };

/// Stage i is u_i = sum_l alpha[i][l] u_l + dt beta[i][l] L(u_l), l < i+1,
/// with u_0 the step input.
struct SspTableau {
  std::string name;
  int order{0};
  std::vector<std::vector<double>> alpha;
  std::vector<std::vector<double>> beta;

  int stages() const { return static_cast<int>(alpha.size()); }
};

inline const SspTableau &ssp_tableau(SspScheme scheme) {
  static const SspTableau rk3{
      "SSPRK3",
      3,
      {{1.0}, {0.75, 0.25}, {1.0 / 3.0, 0.0, 2.0 / 3.0}},
      {{1.0}, {0.0, 0.25}, {0.0, 0.0, 2.0 / 3.0}}};
  // Five-stage fourth-order SSP scheme.
  static const SspTableau rk4{
      "SSPRK4",
      4,
      {{1.0},
       {0.444370493651235, 0.555629506348765},
       {0.620101851488403, 0.0, 0.379898148511597},
       {0.178079954393132, 0.0, 0.0, 0.821920045606868},
       {0.0, 0.0, 0.517231671970585, 0.096059710526147, 0.386708617503269}},
      {{0.391752226571890},
       {0.0, 0.368410593050371},
       {0.0, 0.0, 0.251891774271694},
       {0.0, 0.0, 0.0, 0.544974750228521},
       {0.0, 0.0, 0.0, 0.063692468666290, 0.226007483236906}}};
  return scheme == SspScheme::kSsprk3 ? rk3 : rk4;
}

inline std::string ssp_name(SspScheme s) { return ssp_tableau(s).name; }

/// min alpha/beta over entries with beta > 0.
inline double ssp_coefficient(const SspTableau &t) {
  double c = std::numeric_limits<double>::infinity();
  for (int i = 0; i < t.stages(); ++i)
    for (std::size_t l = 0; l < t.beta[i].size(); ++l)
      if (t.beta[i][l] > 0.0) c = std::min(c, t.alpha[i][l] / t.beta[i][l]);
  return c;
}

inline double ssp_coefficient(SspScheme s) { return ssp_coefficient(ssp_tableau(s)); }

enum class DtPolicy { kOptimalBP, kClassicBP, kJiangLiuBP, kLinearStability };

inline std::string policy_name(DtPolicy p) {
  switch (p) {
    case DtPolicy::kOptimalBP: return "optimal";
    case DtPolicy::kClassicBP: return "classic";
    case DtPolicy::kJiangLiuBP: return "jiangliu";
    case DtPolicy::kLinearStability: return "linear";
  }
  return "unknown";
}

/// Speed ratios with zero axes lifted to a tiny positive value so the
/// decomposition formulas stay defined; all-zero speeds map to (1, 1).
inline SpeedRatios safe_ratios(std::array<double, 2> speeds, std::array<double, 2> spacings) {
  std::array<double, 2> phi{speeds[0] / spacings[0], speeds[1] / spacings[1]};
  const double top = std::max(phi[0], phi[1]);
  if (!(top > 0.0)) return SpeedRatios{1.0, 1.0};
  for (auto &p : phi) p = std::max(p, 1e-12 * top);
  return SpeedRatios{phi[0], phi[1]};
}

/// The decomposition a policy's time step is based on.
inline ConvexDecomposition policy_decomposition(DtPolicy policy, int k, const SpeedRatios &r) {
  switch (policy) {
    case DtPolicy::kClassicBP: return zhang_shu_2d(k, r);
    case DtPolicy::kJiangLiuBP: return jiang_liu_2d(k);
    default: return optimal_2d(k, r);
  }
}

struct StepControl {
  DtPolicy policy{DtPolicy::kOptimalBP};
  double c0{1.0};
  double safety{1.0};
  double fallback_dt{1e-3};
};

/// dt = C_SSP * (policy step) * safety for the current global speeds; the
/// fallback step is used when every speed is zero.
inline double step_controller(const StepControl &ctl, int k, SspScheme scheme,
                              std::array<double, 2> speeds,
                              std::array<double, 2> spacings) {
  double base;
  if (ctl.policy == DtPolicy::kLinearStability) {
    base = linear_stability_dt(k, speeds, spacings);
  } else {
    const auto d = policy_decomposition(ctl.policy, k, safe_ratios(speeds, spacings));
    base = bp_max_dt(d, speeds, spacings, ctl.c0).max_dt;
  }
  if (!std::isfinite(base)) return ctl.fallback_dt;
  return ssp_coefficient(scheme) * base * ctl.safety;
}

}  // namespace bpdg

#endif  // BPDG_TIME_HPP_
