#ifndef BPDG_HARNESS_STUDIES_HPP_
#define BPDG_HARNESS_STUDIES_HPP_

// Grid-refinement study, decomposition/CFL tables, and paired-run
// efficiency comparison.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpdg/decomposition.hpp"
#include "bpdg/harness/config.hpp"
#include "bpdg/harness/run.hpp"
#include "bpdg/time.hpp"

namespace bpdg::harness {

struct ConvergenceRow {
  int n{0};
  ErrorNorms errors;
  // log2(e_{N/2} / e_N); NaN on the coarsest grid
  double order_l1{std::numeric_limits<double>::quiet_NaN()};
  double order_l2{std::numeric_limits<double>::quiet_NaN()};
  double order_linf{std::numeric_limits<double>::quiet_NaN()};
  long steps{0};
};

inline double observed_order(double coarse, double fine, double refinement = 2.0) {
  return std::log(coarse / fine) / std::log(refinement);
}

/// Runs `base` on N x (N * ny/nx) meshes for each N and tabulates the final
/// error norms. Writes errors.csv when output.dir is set.
inline std::vector<ConvergenceRow> convergence_study(const RunConfig &base,
                                                     const std::vector<int> &grids) {
  if (grids.empty()) throw ConfigError("convergence study needs at least one grid");
  std::vector<ConvergenceRow> rows;
  for (int n : grids) {
    if (n < 1) throw ConfigError("grid sizes must be positive");
    RunConfig c = base;
    c.nx = n;
    c.ny = std::max(1, static_cast<int>(std::lround(double(n) * base.ny / base.nx)));
    c.output_dir.clear();
    c.output_times.clear();
    const auto rep = run(c);
    if (!rep.final().errors)
      throw ConfigError("problem '" + c.problem + "' has no exact solution");
    ConvergenceRow row;
    row.n = n;
    row.errors = *rep.final().errors;
    row.steps = rep.steps;
    if (!rows.empty()) {
      const auto &prev = rows.back();
      const double ratio = double(n) / prev.n;
      row.order_l1 = observed_order(prev.errors.l1, row.errors.l1, ratio);
      row.order_l2 = observed_order(prev.errors.l2, row.errors.l2, ratio);
      row.order_linf = observed_order(prev.errors.linf, row.errors.linf, ratio);
    }
    rows.push_back(row);
  }
  if (!base.output_dir.empty()) {
    std::filesystem::create_directories(base.output_dir);
    std::ofstream out(std::filesystem::path(base.output_dir) / "errors.csv");
    out << "n,l1,l2,linf,order_l1,order_l2,order_linf,steps\n";
    for (const auto &r : rows)
      out << r.n << ',' << fmt_double(r.errors.l1) << ',' << fmt_double(r.errors.l2) << ','
          << fmt_double(r.errors.linf) << ',' << fmt_double(r.order_l1) << ','
          << fmt_double(r.order_l2) << ',' << fmt_double(r.order_linf) << ',' << r.steps
          << '\n';
  }
  return rows;
}

struct DecompRow {
  int dim{2};
  std::string scheme;
  double dt{0.0};           // for the given ratios, unit spacings
  double dt_equal_h{0.0};   // unit speeds, dt / h
  int internal_nodes{0};    // at the given ratios
  double defect{0.0};
  bool feasible{false};
};

/// CFL step, equal-ratio special case, internal node count and exactness
/// defect of every decomposition. The 2D rows use the first two ratios.
inline std::vector<DecompRow> decomp_report(int k, const std::vector<double> &phi, double c0) {
  if (phi.size() != 3) throw std::invalid_argument("decomp_report: need three ratios");
  std::vector<DecompRow> rows;
  for (int dim : {2, 3}) {
    const std::vector<double> p(phi.begin(), phi.begin() + dim);
    const SpeedRatios ratios(p);
    const std::vector<double> ones(dim, 1.0);
    const SpeedRatios equal(ones);
    auto add = [&](ConvexDecomposition d, ConvexDecomposition d_equal) {
      DecompRow r;
      r.dim = dim;
      r.scheme = scheme_name(d.scheme);
      r.dt = bp_max_dt(d, p, ones, c0).max_dt;
      r.dt_equal_h = bp_max_dt(d_equal, ones, ones, c0).max_dt;
      r.internal_nodes = static_cast<int>(d.internal_nodes.size());
      r.defect = verify_exactness(d);
      r.feasible = check_feasibility(d).ok();
      rows.push_back(r);
    };
    add(optimal(k, ratios), optimal(k, equal));
    add(zhang_shu(k, ratios), zhang_shu(k, equal));
    add(jiang_liu(k, dim), jiang_liu(k, dim));
  }
  return rows;
}

inline void print_decomp_report(std::ostream &os, int k, const std::vector<double> &phi,
                                double c0, const std::vector<DecompRow> &rows) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "k = %d, phi = (%g, %g, %g), c0 = %g\n", k, phi[0], phi[1],
                phi[2], c0);
  os << buf;
  os << "dim  scheme       dt(phi)        dt/h(equal)  1/(dt/h)  nodes  defect     feasible\n";
  for (const auto &r : rows) {
    std::snprintf(buf, sizeof buf, "%-4d %-12s %-14.8g %-12.8g %-9.4g %-6d %-10.2e %s\n", r.dim,
                  r.scheme.c_str(), r.dt, r.dt_equal_h, 1.0 / r.dt_equal_h, r.internal_nodes,
                  r.defect, r.feasible ? "yes" : "no");
    os << buf;
  }
}

inline void write_decomp_csv(const std::filesystem::path &path,
                             const std::vector<DecompRow> &rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "dim,scheme,dt,dt_equal_over_h,internal_nodes,defect,feasible\n";
  for (const auto &r : rows)
    out << r.dim << ',' << r.scheme << ',' << fmt_double(r.dt) << ','
        << fmt_double(r.dt_equal_h) << ',' << r.internal_nodes << ',' << fmt_double(r.defect)
        << ',' << (r.feasible ? 1 : 0) << '\n';
}

struct EfficiencyReport {
  RunReport a, b;
  double step_ratio{0.0};     // steps(b) / steps(a)
  double formula_ratio{0.0};  // dt(a) / dt(b) at the speeds recorded by run a
  bool consistent{false};     // |steps(b) - formula_ratio * steps(a)| <= 2 (1 + ratio)
};

/// Runs both configs (typically optimal-tau0 then classic-tau1) on the same
/// problem and compares step counts with the step-size formula ratio.
inline EfficiencyReport efficiency_compare(const RunConfig &a, const RunConfig &b) {
  if (a.problem != b.problem || a.nx != b.nx || a.ny != b.ny)
    throw ConfigError("compare: configs must share problem and mesh");
  EfficiencyReport e;
  e.a = run(a);
  e.b = run(b);
  e.step_ratio = double(e.b.steps) / double(e.a.steps);
  const std::array<double, 2> h{(a.domain[1] - a.domain[0]) / a.nx,
                                (a.domain[3] - a.domain[2]) / a.ny};
  const double dta = step_controller(a.step, a.k, a.scheme, e.a.last_speeds, h);
  const double dtb = step_controller(b.step, b.k, b.scheme, e.a.last_speeds, h);
  e.formula_ratio = dta / dtb;
  e.consistent = std::fabs(e.b.steps - e.formula_ratio * e.a.steps) <=
                 2.0 * (1.0 + e.formula_ratio);
  return e;
}

inline void print_efficiency(std::ostream &os, const EfficiencyReport &e) {
  char buf[240];
  os << "run  dt_policy  node_set  steps     wall_s     min_avg              max_avg\n";
  for (const auto *r : {&e.a, &e.b}) {
    std::snprintf(buf, sizeof buf, "%-4s %-10s %-9s %-9ld %-10.3f %-20.17g %-20.17g\n",
                  r == &e.a ? "A" : "B", policy_name(r->config.step.policy).c_str(),
                  node_set_name(r->config.node_set).c_str(), r->steps, r->wall_seconds,
                  r->final().min_avg, r->final().max_avg);
    os << buf;
    if (r->final().errors) {
      std::snprintf(buf, sizeof buf, "     errors L1 %.6e  L2 %.6e  Linf %.6e\n",
                    r->final().errors->l1, r->final().errors->l2, r->final().errors->linf);
      os << buf;
    }
  }
  std::snprintf(buf, sizeof buf,
                "step ratio B/A = %.6f, dt formula ratio = %.6f, consistent = %s\n",
                e.step_ratio, e.formula_ratio, e.consistent ? "yes" : "no");
  os << buf;
}

}  // namespace bpdg::harness

#endif  // BPDG_HARNESS_STUDIES_HPP_
