#ifndef BPDG_SOLVER_HPP_
#define BPDG_SOLVER_HPP_

// Time stepping: SSP Runge-Kutta stages with the limiter chain applied
// after every stage, the step-size policy, and bookkeeping of post-stage
// cell averages.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "bpdg/decomposition.hpp"
#include "bpdg/dg.hpp"
#include "bpdg/errors.hpp"
#include "bpdg/limiters.hpp"
#include "bpdg/time.hpp"

namespace bpdg {

enum class NodeSetChoice { kOptimal, kClassic, kJiangLiu };

inline std::string node_set_name(NodeSetChoice n) {
  switch (n) {
    case NodeSetChoice::kOptimal: return "optimal";
    case NodeSetChoice::kClassic: return "classic";
    case NodeSetChoice::kJiangLiu: return "jiangliu";
  }
  return "unknown";
}

struct SolverOptions {
  SspScheme scheme{SspScheme::kSsprk3};
  StepControl step{};
  bool bp_limiter{true};
  NodeSetChoice node_set{NodeSetChoice::kOptimal};
  bool tvb{false};
  double tvb_m{1.0};
};

/// Extremes of post-stage cell averages of the first component, plus the
/// smallest average pressure for Euler.
struct AverageBounds {
  double min{std::numeric_limits<double>::infinity()};
  double max{-std::numeric_limits<double>::infinity()};
  double min_pressure{std::numeric_limits<double>::infinity()};
};

template <typename Model>
class Solver {
 public:
  static constexpr int M = Model::kComponents;
  using State = typename Model::State;
  using Field = DGField<M>;

  Solver(Model model, Mesh2D mesh, int k, SolverOptions opt)
      : op_(std::move(model), std::move(mesh), k), opt_(opt) {
    rebuild_nodes({1.0, 1.0});
  }

  DGOperator<Model> &op() { return op_; }
  const DGOperator<Model> &op() const { return op_; }
  const SolverOptions &options() const { return opt_; }
  Field &field() { return u_; }
  const Field &field() const { return u_; }
  double time() const { return t_; }
  long steps() const { return steps_; }
  const LimiterDiagnostics &diagnostics() const { return diag_; }
  const AverageBounds &bounds() const { return bounds_; }
  bool bp_violation() const { return violation_; }
  const LimiterNodeSet &node_set() const { return nodes_; }
  std::array<double, 2> last_speeds() const { return speeds_; }
  double last_dt() const { return last_dt_; }

  /// Project initial data and apply the limiter chain once.
  template <typename F>
  void initialize(F &&u0) {
    u_ = op_.project(std::forward<F>(u0));
    t_ = 0.0;
    steps_ = 0;
    const auto a = op_.max_speeds(u_, nullptr);
    rebuild_nodes(a);
    apply_limiters(u_);
    record_bounds(u_);
  }

  /// Use an existing field as the current state.
  void set_field(Field f, double t = 0.0) {
    u_ = std::move(f);
    t_ = t;
  }

  /// Global speeds of the current state and the policy step for them.
  double next_dt() {
    speeds_ = op_.max_speeds(u_, &interior_);
    return step_controller(opt_.step, op_.degree(), opt_.scheme, speeds_,
                           {op_.mesh().dx(), op_.mesh().dy()});
  }

  /// One SSP step of size dt from the current state.
  void step(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw std::invalid_argument("step: dt must be positive and finite");
    try {
      if (opt_.node_set == NodeSetChoice::kOptimal) {
        rebuild_nodes(speeds_);
        // The node set moved with the speeds; re-limit so the step starts
        // admissible on the new nodes.
        if (opt_.bp_limiter) diag_.merge(bp_scaling_limit(u_, op_.model(), all_nodes_));
      }
      const auto &tab = ssp_tableau(opt_.scheme);
      const int s = tab.stages();
      if (static_cast<int>(stage_.size()) < s + 1) {
        stage_.resize(s + 1, op_.make_field());
        rate_.resize(s, op_.make_field());
      }
      stage_[0] = u_;
      for (int i = 0; i < s; ++i) {
        op_.stage_residual(stage_[i], &interior_, rate_[i]);
        auto &out = stage_[i + 1].data();
        std::fill(out.begin(), out.end(), 0.0);
        for (int l = 0; l <= i; ++l) {
          const double a = tab.alpha[i][l], b = tab.beta[i][l] * dt;
          if (a == 0.0 && b == 0.0) continue;
          const auto &ul = stage_[l].data();
          const auto &rl = rate_[l].data();
          for (std::size_t n = 0; n < out.size(); ++n) out[n] += a * ul[n] + b * rl[n];
        }
        apply_limiters(stage_[i + 1]);
        record_bounds(stage_[i + 1]);
      }
      std::swap(u_, stage_[s]);
      ++steps_;
      last_dt_ = dt;
    } catch (AdmissibilityError &e) {
      e.set_step(steps_ + 1);
      throw;
    }
  }

  /// Step to exactly t_target; the last step is clipped. `on_step` runs
  /// after every accepted step.
  void advance_to(double t_target, const std::function<void()> &on_step = {}) {
    const double tol = 1e-12 * std::max(1.0, std::fabs(t_target));
    while (t_ < t_target - tol) {
      double dt = next_dt();
      if (t_ + dt >= t_target - tol) dt = t_target - t_;
      step(dt);
      t_ = (t_target - (t_ + dt) <= tol) ? t_target : t_ + dt;
      if (on_step) on_step();
    }
    t_ = std::max(t_, t_target);
  }

 private:
  void rebuild_nodes(std::array<double, 2> speeds) {
    const int k = op_.degree();
    ConvexDecomposition d;
    switch (opt_.node_set) {
      case NodeSetChoice::kOptimal:
        d = optimal_2d(k, safe_ratios(speeds, {op_.mesh().dx(), op_.mesh().dy()}));
        break;
      case NodeSetChoice::kClassic:
        d = zhang_shu_2d(k, safe_ratios(speeds, {op_.mesh().dx(), op_.mesh().dy()}));
        break;
      case NodeSetChoice::kJiangLiu:
        d = jiang_liu_2d(k);
        break;
    }
    nodes_ = build_node_set(d, k);
    all_nodes_ = PointTable(op_.basis(), nodes_.points);
    interior_ = PointTable(op_.basis(), nodes_.internal());
  }

  void apply_limiters(Field &f) {
    if (opt_.tvb) diag_.merge(tvb_minmod_limit(f, opt_.tvb_m));
    if (opt_.bp_limiter) diag_.merge(bp_scaling_limit(f, op_.model(), all_nodes_));
  }

  void record_bounds(const Field &f) {
    const auto &model = op_.model();
    for (int c = 0; c < f.mesh().cells(); ++c) {
      const State u = f.average(c);
      bounds_.min = std::min(bounds_.min, u[0]);
      bounds_.max = std::max(bounds_.max, u[0]);
      if constexpr (std::is_same_v<typename Model::Region, BoxRegion>) {
        const double scale = std::max({1.0, std::fabs(model.region.lo), std::fabs(model.region.hi)});
        if (u[0] < model.region.lo - 1e-12 * scale || u[0] > model.region.hi + 1e-12 * scale ||
            !std::isfinite(u[0]))
          violation_ = true;
      } else {
        const double p = u[0] > 0.0 ? model.pressure(u) : -INFINITY;
        bounds_.min_pressure = std::min(bounds_.min_pressure, p);
        if (!(u[0] >= 0.5 * model.region.eps_rho) || !(p >= 0.5 * model.region.eps_p))
          violation_ = true;
      }
    }
  }

  DGOperator<Model> op_;
  SolverOptions opt_;
  Field u_;
  double t_{0.0};
  long steps_{0};
  double last_dt_{0.0};
  std::array<double, 2> speeds_{0.0, 0.0};
  LimiterNodeSet nodes_;
  PointTable all_nodes_;
  PointTable interior_;
  std::vector<Field> stage_;
  std::vector<Field> rate_;
  LimiterDiagnostics diag_;
  AverageBounds bounds_;
  bool violation_{false};
};

}  // namespace bpdg

#endif  // BPDG_SOLVER_HPP_
