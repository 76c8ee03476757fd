// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Informational lines start with "  info".

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bpdg/decomposition.hpp"
#include "bpdg/errors.hpp"
#include "bpdg/harness/config.hpp"
#include "bpdg/harness/run.hpp"
#include "bpdg/harness/studies.hpp"
#include "bpdg/quadrature.hpp"

namespace {

using namespace bpdg;
using namespace bpdg::harness;
using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void info(const char *fmt, auto... args) {
  std::printf("  info ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

void verdict(int id, const char *name, bool ok, double secs, double budget,
             const std::string &detail) {
  const bool in_time = secs < budget;
  const bool pass = ok && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %2d %-26s %s (%.1f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL", id, name,
              detail.c_str(), secs, budget, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> random_phi(std::mt19937_64 &rng, int dim) {
  std::uniform_real_distribution<double> logu(-3.0, 3.0);
  std::vector<double> phi(dim);
  for (auto &p : phi) p = std::exp(logu(rng));
  return phi;
}

// 1. Gauss exact to 2Q-1, Lobatto to 2L-3, Lobatto endpoint weight.
void quadrature_exactness() {
  const auto t0 = Clock::now();
  double worst = 0.0, worst_end = 0.0;
  for (int q = 1; q <= 8; ++q) worst = std::max(worst, exactness_defect(gauss_rule(q), 2 * q - 1));
  for (int l = 2; l <= 8; ++l) {
    const auto r = gauss_lobatto_rule(l);
    worst = std::max(worst, exactness_defect(r, 2 * l - 3));
    const double w = 1.0 / (l * (l - 1.0));
    worst_end = std::max({worst_end, std::fabs(r.weights.front() - w), std::fabs(r.weights.back() - w)});
  }
  verdict(1, "quadrature exactness", worst <= 1e-13 && worst_end <= 1e-14, seconds_since(t0), 1,
          fmt("max defect %.2e (tol 1e-13), endpoint weight error %.2e (tol 1e-14)", worst,
              worst_end));
}

// 2. All 2D decompositions and the optimal 3D one are feasible and exact.
void decomposition_feasibility() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  int checked = 0, bad = 0;
  double worst = 0.0;
  auto check = [&](const ConvexDecomposition &d) {
    const auto f = check_feasibility(d);
    worst = std::max({worst, f.exactness_defect, f.mass_defect});
    ++checked;
    if (!f.ok(1e-13)) ++bad;
  };
  for (int k : {2, 3}) {
    for (int t = 0; t < 100; ++t) {
      const SpeedRatios r2(random_phi(rng, 2));
      check(optimal_2d(k, r2));
      check(zhang_shu_2d(k, r2));
      check(jiang_liu_2d(k));
      check(optimal_3d(k, SpeedRatios(random_phi(rng, 3))));
    }
  }
  verdict(2, "decomposition feasibility", bad == 0, seconds_since(t0), 5,
          fmt("%d decompositions, %d infeasible, max defect %.2e", checked, bad, worst));
}

// 3. CFL closed forms of both tables, general and equal-ratio cases.
void cfl_tables() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(7);
  double worst = 0.0;
  auto rel = [&](double got, double want) {
    worst = std::max(worst, std::fabs(got - want) / std::fabs(want));
  };
  for (int k : {2, 3}) {
    for (int t = 0; t < 200; ++t) {
      // Independent closed forms with unit spacings and speeds phi.
      const double c0 = t % 2 ? 1.0 : 0.5;
      const auto p2 = random_phi(rng, 2);
      const std::vector<double> one2(2, 1.0);
      const double m2 = std::max(p2[0], p2[1]);
      rel(bp_max_dt(optimal_2d(k, SpeedRatios(p2)), p2, one2, c0).max_dt,
          c0 / (2 * p2[0] + 2 * p2[1] + 4 * m2));
      rel(bp_max_dt(zhang_shu_2d(k, SpeedRatios(p2)), p2, one2, c0).max_dt,
          c0 / (6 * p2[0] + 6 * p2[1]));
      rel(bp_max_dt(jiang_liu_2d(k), p2, one2, c0).max_dt, c0 / (12 * m2));

      const auto p3 = random_phi(rng, 3);
      const std::vector<double> one3(3, 1.0);
      const double m3 = std::max({p3[0], p3[1], p3[2]});
      rel(bp_max_dt(optimal_3d(k, SpeedRatios(p3)), p3, one3, c0).max_dt,
          c0 / (2 * p3[0] + 2 * p3[1] + 2 * p3[2] + 4 * m3));
      rel(bp_max_dt(zhang_shu_3d(k, SpeedRatios(p3)), p3, one3, c0).max_dt,
          c0 / (6 * (p3[0] + p3[1] + p3[2])));
      rel(bp_max_dt(jiang_liu_3d(k), p3, one3, c0).max_dt, c0 / (18 * m3));
    }
    // Equal ratios with a = 1, dx = h.
    const double h = 0.01;
    const std::vector<double> a2{1.0, 1.0}, d2{h, h}, a3{1.0, 1.0, 1.0}, d3{h, h, h};
    const SpeedRatios e2{1.0, 1.0}, e3{1.0, 1.0, 1.0};
    rel(bp_max_dt(optimal_2d(k, e2), a2, d2, 1.0).max_dt, h / 8);
    rel(bp_max_dt(zhang_shu_2d(k, e2), a2, d2, 1.0).max_dt, h / 12);
    rel(bp_max_dt(jiang_liu_2d(k), a2, d2, 1.0).max_dt, h / 12);
    rel(bp_max_dt(optimal_3d(k, e3), a3, d3, 1.0).max_dt, h / 10);
    rel(bp_max_dt(zhang_shu_3d(k, e3), a3, d3, 1.0).max_dt, h / 18);
    rel(bp_max_dt(jiang_liu_3d(k), a3, d3, 1.0).max_dt, h / 18);
    rel(bp_max_dt(optimal_2d(k, e2), a2, d2, 0.5).max_dt, h / 16);
    rel(bp_max_dt(zhang_shu_2d(k, e2), a2, d2, 0.5).max_dt, h / 24);
    rel(linear_stability_dt(k, a2, d2), h / (2 * k + 1) / 2);
  }
  verdict(3, "CFL table reproduction", worst <= 1e-14, seconds_since(t0), 1,
          fmt("max relative error %.2e (tol 1e-14)", worst));
}

// 4. Moment certificates and randomized search against the optimum.
void optimality() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(99);
  int certs = 0, not_dominated = 0;
  for (int k : {2, 3})
    for (int t = 0; t < 50; ++t) {
      const SpeedRatios r(random_phi(rng, 2));
      for (const auto &d : {optimal_2d(k, r), zhang_shu_2d(k, r), jiang_liu_2d(k)}) {
        ++certs;
        if (optimality_certificate(k, r, d).verdict != Verdict::kDominated) ++not_dominated;
      }
    }
  double worst_excess = -INFINITY;
  long feasible = 0, counterexamples = 0;
  bool empty = false;
  for (int k : {2, 3})
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      for (const SpeedRatios &r : {SpeedRatios{1.0, 1.0}, SpeedRatios{2.0, 1.0}, SpeedRatios{1.0, 5.0}}) {
        const auto res = random_feasible_search(k, r, 10000, seed);
        if (!res.best_dt) {
          empty = true;
          continue;
        }
        feasible += res.feasible;
        counterexamples += res.counterexamples;
        const double opt = 1.0 / (2.0 * r.psi());
        worst_excess = std::max(worst_excess, *res.best_dt - opt);
      }
  verdict(4, "optimality", not_dominated == 0 && !empty && worst_excess <= 1e-10,
          seconds_since(t0), 30,
          fmt("%d certificates, %d not dominated; search: %ld feasible samples, max(best - "
              "optimal) = %.2e (tol 1e-10), %ld counterexamples",
              certs, not_dominated, feasible, worst_excess, counterexamples));
}

// 5. Internal node counts.
void node_counts() {
  const auto t0 = Clock::now();
  const SpeedRatios e2{1.0, 1.0}, e3{1.0, 1.0, 1.0};
  const int zs2 = static_cast<int>(zhang_shu_2d(2, e2).internal_nodes.size());
  const int zs2k3 = static_cast<int>(zhang_shu_2d(3, e2).internal_nodes.size());
  const int zs3 = static_cast<int>(zhang_shu_3d(2, e3).internal_nodes.size());
  const int zs3k3 = static_cast<int>(zhang_shu_3d(3, e3).internal_nodes.size());
  const int jl2 = static_cast<int>(jiang_liu_2d(2).internal_nodes.size());
  const int jl3 = static_cast<int>(jiang_liu_3d(3).internal_nodes.size());
  std::mt19937_64 rng(5);
  std::size_t max2 = 0, max3 = 0;
  for (int k : {2, 3})
    for (int t = 0; t < 500; ++t) {
      max2 = std::max(max2, optimal_2d(k, SpeedRatios(random_phi(rng, 2))).internal_nodes.size());
      max3 = std::max(max3, optimal_3d(k, SpeedRatios(random_phi(rng, 3))).internal_nodes.size());
    }
  const bool ok = zs2 == 5 && zs2k3 == 8 && zs3 == 19 && zs3k3 == 48 && jl2 == 5 &&
                  jl3 == 48 && max2 <= 2 && max3 <= 4;
  verdict(5, "node counts", ok, seconds_since(t0), 1,
          fmt("classic 2D %d/%d, classic 3D %d/%d, optimal max 2D %zu, 3D %zu", zs2, zs2k3,
              zs3, zs3k3, max2, max3));
}

RunConfig advection(int n, int k) {
  RunConfig c = preset("advection_sine");
  c.nx = c.ny = n;
  c.k = k;
  c.scheme = k == 2 ? SspScheme::kSsprk3 : SspScheme::kSsprk4;
  return c;
}

RunConfig classic_tau1(RunConfig c) {
  c.step.policy = DtPolicy::kClassicBP;
  c.node_set = NodeSetChoice::kClassic;
  return c;
}

// Runs reused by the efficiency comparison.
RunReport advection_optimal_100;
EfficiencyReport burgers_pair;
RunReport mach80_optimal;

// 6. Maximum principle for advection at desk scale.
void maximum_principle() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string worst;
  double lo = INFINITY, hi = -INFINITY, growth = 0.0;
  for (int n : {50, 100})
    for (int k : {2, 3}) {
      RunConfig c = advection(n, k);
      c.output_times = {0.2};
      const auto r = run(c);
      const double l2_early = r.snapshots.front().errors->l2;
      const double l2_end = r.final().errors->l2;
      lo = std::min(lo, r.stage_bounds.min);
      hi = std::max(hi, r.stage_bounds.max);
      growth = std::max(growth, l2_end / l2_early);
      const bool run_ok = !r.bp_violation && r.stage_bounds.min >= -1.0 - 1e-12 &&
                          r.stage_bounds.max <= 1.0 + 1e-12 && l2_end <= 3.0 * l2_early;
      ok = ok && run_ok;
      info("advection %dx%d k=%d: %ld steps, post-stage averages in [%.17g, %.17g], L2(0.2) = "
           "%.3e, L2(2) = %.3e",
           n, n, k, r.steps, r.stage_bounds.min, r.stage_bounds.max, l2_early, l2_end);
      if (n == 100 && k == 2) advection_optimal_100 = r;
    }
  verdict(6, "maximum principle", ok, seconds_since(t0), 120,
          fmt("post-stage averages in [%.17g, %.17g], max L2(2)/L2(0.2) = %.3f (tol 3)", lo, hi,
              growth));
}

// 7. Convergence orders of the DG discretization.
void convergence() {
  const auto t0 = Clock::now();
  const std::vector<int> grids{20, 40, 80, 160};
  double min2 = INFINITY, min3 = INFINITY;
  for (int k : {2, 3}) {
    RunConfig c = advection(20, k);
    c.t_end = 0.5;
    c.bp_limiter = false;
    const auto rows = convergence_study(c, grids);
    for (const auto &r : rows) {
      info("k=%d N=%-4d L1 = %.4e order %.3f, L2 order %.3f, Linf order %.3f", k, r.n,
           r.errors.l1, r.order_l1, r.order_l2, r.order_linf);
      if (!std::isnan(r.order_l1)) (k == 2 ? min2 : min3) = std::min(k == 2 ? min2 : min3, r.order_l1);
    }
  }
  const double secs = seconds_since(t0);
  verdict(7, "convergence", min2 >= 2.7 && min3 >= 3.7, secs, 300,
          fmt("min L1 order k=2 SSPRK3 %.3f (>= 2.7), k=3 SSPRK4 %.3f (>= 3.7)", min2, min3));

  // Same study with the bound-preserving limiter applied after every stage.
  // Reported, not asserted: stage values overshoot the bounds at the crests.
  for (int k : {2, 3}) {
    RunConfig c = advection(20, k);
    c.t_end = 0.5;
    const auto rows = convergence_study(c, {20, 40, 80});
    for (const auto &r : rows)
      info("limiter on, k=%d N=%-4d L1 = %.4e order %.3f", k, r.n, r.errors.l1, r.order_l1);
  }
}

// 8. Burgers Riemann problem, optimal-tau0 vs classic-tau1.
void burgers_riemann() {
  const auto t0 = Clock::now();
  const RunConfig a = preset("burgers_riemann");
  burgers_pair = efficiency_compare(a, classic_tau1(a));
  bool ok = true;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto *r : {&burgers_pair.a, &burgers_pair.b}) {
    lo = std::min(lo, r->stage_bounds.min);
    hi = std::max(hi, r->stage_bounds.max);
    ok = ok && !r->bp_violation;
  }
  ok = ok && lo >= -1.0 - 1e-12 && hi <= 0.8 + 1e-12;
  const double rel = std::fabs(burgers_pair.step_ratio / burgers_pair.formula_ratio - 1.0);
  ok = ok && rel <= 0.05;
  info("burgers optimal %ld steps (%.2f s), classic %ld steps (%.2f s), speeds (%.6g, %.6g)",
       burgers_pair.a.steps, burgers_pair.a.wall_seconds, burgers_pair.b.steps,
       burgers_pair.b.wall_seconds, burgers_pair.a.last_speeds[0], burgers_pair.a.last_speeds[1]);
  verdict(8, "burgers riemann", ok, seconds_since(t0), 120,
          fmt("post-stage averages in [%.17g, %.17g]; step ratio %.4f vs dt ratio %.4f (rel %.2e, "
              "tol 0.05)",
              lo, hi, burgers_pair.step_ratio, burgers_pair.formula_ratio, rel));
}

// 9. Euler jets: positivity with the limiter, breakdown without it.
void euler_jets() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  double worst_budget = 0.0;
  for (const char *name : {"mach80_jet", "mach2000_jet"}) {
    const auto ts = Clock::now();
    try {
      const auto r = run(preset(name));
      const bool run_ok = !r.bp_violation && r.stage_bounds.min >= 0.5e-13 &&
                          r.stage_bounds.min_pressure >= 0.5e-13;
      ok = ok && run_ok;
      info("%s: %ld steps, min post-stage density %.6g, min post-stage pressure %.6g, %.1f s",
           name, r.steps, r.stage_bounds.min, r.stage_bounds.min_pressure, r.wall_seconds);
      detail += fmt("%s completed (%ld steps), ", name, r.steps);
      if (std::string(name) == "mach80_jet") mach80_optimal = r;
    } catch (const AdmissibilityError &e) {
      ok = false;
      detail += fmt("%s failed: %s, ", name, e.what());
    }
    worst_budget = std::max(worst_budget, seconds_since(ts));
  }
  RunConfig off = preset("mach80_jet");
  off.bp_limiter = false;
  off.max_steps = 200;
  try {
    run(off);
    ok = false;
    detail += "limiter off: no failure";
  } catch (const AdmissibilityError &e) {
    ok = ok && e.step() >= 1 && e.step() <= 200;
    detail += fmt("limiter off: admissibility failure in step %ld", e.step());
    info("limiter off: %s", e.what());
  } catch (const StepLimitReached &) {
    ok = false;
    detail += "limiter off: survived 200 steps";
  }
  // Budget is per jet run; report the slowest.
  verdict(9, "euler jets", ok, worst_budget, 600, detail);
  info("criterion 9 total %.1f s", seconds_since(t0));
}

// 10. Step counts of optimal-tau0 vs classic-tau1.
void efficiency() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  auto pair = [&](const char *name, const RunReport &a, const RunReport &b, bool equal_speeds) {
    const double ratio = double(b.steps) / double(a.steps);
    bool pair_ok = a.steps < b.steps;
    if (equal_speeds) pair_ok = pair_ok && ratio >= 1.45 && ratio <= 1.55;
    ok = ok && pair_ok;
    info("%s: optimal %ld steps %.2f s, classic %ld steps %.2f s, ratio %.4f", name, a.steps,
         a.wall_seconds, b.steps, b.wall_seconds, ratio);
    detail += fmt("%s%s %ld/%ld=%.3f", detail.empty() ? "" : ", ", name, b.steps, a.steps, ratio);
  };
  pair("advection", advection_optimal_100, run(classic_tau1(advection(100, 2))), true);
  const auto &bs = burgers_pair.a.last_speeds;
  pair("burgers", burgers_pair.a, burgers_pair.b, bs[0] == bs[1]);
  pair("mach80", mach80_optimal, run(classic_tau1(preset("mach80_jet"))), false);
  verdict(10, "efficiency direction", ok, seconds_since(t0), 1200, detail);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<std::function<void()>> criteria{
      quadrature_exactness, decomposition_feasibility, cfl_tables, optimality, node_counts,
      maximum_principle,    convergence,               burgers_riemann, euler_jets, efficiency};
  for (const auto &c : criteria) {
    try {
      c();
    } catch (const std::exception &e) {
      ++failures;
      std::printf("[FAIL] unexpected exception: %s\n", e.what());
    }
  }
  std::printf("%d criteria failed, total %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
