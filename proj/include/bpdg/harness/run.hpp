#ifndef BPDG_HARNESS_RUN_HPP_
#define BPDG_HARNESS_RUN_HPP_

// Problem setup, the time loop with output snapshots, and CSV writers for
// report.csv, errors.csv and field_<t>.csv.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpdg/dg.hpp"
#include "bpdg/harness/config.hpp"
#include "bpdg/mesh.hpp"
#include "bpdg/physics.hpp"
#include "bpdg/solver.hpp"

namespace bpdg::harness {

/// Raised when a run exceeds its max_steps budget.
class StepLimitReached : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  double time{0.0};
  long steps{0};
  double min_avg{0.0}, max_avg{0.0};
  double min_pressure{std::numeric_limits<double>::quiet_NaN()};
  std::optional<ErrorNorms> errors;
  LimiterDiagnostics limiter;
};

struct RunReport {
  RunConfig config;
  std::vector<Snapshot> snapshots;  // one per output time, the last at t_end
  long steps{0};
  double wall_seconds{0.0};
  LimiterDiagnostics limiter;
  AverageBounds stage_bounds;  // over every post-stage field
  bool bp_violation{false};
  std::array<double, 2> last_speeds{0.0, 0.0};
  double first_dt{0.0};
  double max_dt{0.0};

  const Snapshot &final() const { return snapshots.back(); }
};

inline std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Output times as they appear in file names.
inline std::string time_tag(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", t);
  return buf;
}

namespace detail {

inline Mesh2D build_mesh(const RunConfig &c, const std::vector<double> &inflow_state) {
  std::array<BoundaryCondition, 4> bc;
  for (int s = 0; s < 4; ++s) {
    switch (c.bc[s]) {
      case SideKind::kPeriodic: bc[s] = BoundaryCondition::periodic(); break;
      case SideKind::kOutflow: bc[s] = BoundaryCondition::outflow(); break;
      case SideKind::kInflow:
        bc[s] = BoundaryCondition::inflow(c.jet_y_lo, c.jet_y_hi, inflow_state);
        break;
    }
  }
  return Mesh2D(c.domain[0], c.domain[1], c.domain[2], c.domain[3], c.nx, c.ny, bc);
}

inline std::vector<std::string> component_names(const std::string &model) {
  if (model == "euler2d") return {"rho", "mx", "my", "E"};
  return {"u"};
}

}  // namespace detail

/// Calls fn(model, mesh, u0, exact) with the concrete model type for the
/// configured problem. `exact` is empty when no exact solution is known.
template <typename Fn>
decltype(auto) dispatch_problem(const RunConfig &c, Fn &&fn) {
  using Exact1 = std::function<std::array<double, 1>(double, double, double)>;
  using Exact4 = std::function<std::array<double, 4>(double, double, double)>;
  if (c.problem == "advection_sine") {
    LinearAdvection model;
    model.cx = c.cx;
    model.cy = c.cy;
    const double cx = c.cx, cy = c.cy;
    auto u0 = [](double x, double y) {
      return std::array<double, 1>{std::sin(M_PI * (x + y))};
    };
    Exact1 exact = [cx, cy](double x, double y, double t) {
      return std::array<double, 1>{std::sin(M_PI * (x - cx * t + y - cy * t))};
    };
    return fn(model, detail::build_mesh(c, {}), u0, std::optional<Exact1>(exact));
  }
  if (c.problem == "burgers_riemann") {
    Burgers model;
    const double xm = 0.5 * (c.domain[0] + c.domain[1]);
    const double ym = 0.5 * (c.domain[2] + c.domain[3]);
    const auto q = c.quadrants;
    double lo = q[0], hi = q[0];
    for (double v : q) lo = std::min(lo, v), hi = std::max(hi, v);
    model.region = BoxRegion(lo, hi);
    auto u0 = [=](double x, double y) {
      const bool upper = y > ym, right = x > xm;
      return std::array<double, 1>{upper ? (right ? q[1] : q[0]) : (right ? q[3] : q[2])};
    };
    return fn(model, detail::build_mesh(c, {}), u0, std::optional<Exact1>());
  }
  if (c.problem == "mach80_jet" || c.problem == "mach2000_jet") {
    Euler model;
    model.gamma = c.gamma;
    const auto js = c.jet_state, am = c.ambient;
    if (!(js[0] > 0.0 && js[3] > 0.0 && am[0] > 0.0 && am[3] > 0.0))
      throw ConfigError("jet and ambient states need positive density and pressure");
    const auto jet = model.from_primitive(js[0], js[1], js[2], js[3]);
    const auto amb = model.from_primitive(am[0], am[1], am[2], am[3]);
    auto u0 = [amb](double, double) { return amb; };
    return fn(model, detail::build_mesh(c, std::vector<double>(jet.begin(), jet.end())), u0,
              std::optional<Exact4>());
  }
  throw ConfigError("unknown problem '" + c.problem + "'");
}

inline SolverOptions solver_options(const RunConfig &c) {
  SolverOptions o;
  o.scheme = c.scheme;
  o.step = c.step;
  o.bp_limiter = c.bp_limiter;
  o.node_set = c.node_set;
  o.tvb = c.tvb_m > 0.0;
  o.tvb_m = c.tvb_m;
  return o;
}

template <int M>
void write_field(const std::filesystem::path &path, const DGField<M> &f,
                 const std::vector<std::string> &names) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "i,j,x,y";
  for (const auto &n : names) out << ',' << n;
  out << '\n';
  const auto &mesh = f.mesh();
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      out << i << ',' << j << ',' << fmt_double(mesh.center_x(i)) << ','
          << fmt_double(mesh.center_y(j));
      const auto u = f.average(i, j);
      for (int m = 0; m < M; ++m) out << ',' << fmt_double(u[m]);
      out << '\n';
    }
}

inline const char *report_header() {
  return "problem,model,k,scheme,dt_policy,node_set,limiter_bp,tvb_M,nx,ny,time,steps,"
         "min_avg,max_avg,min_pressure,l1,l2,linf,cells_limited,min_theta,troubled_cells,"
         "bp_violation";
}

inline void write_report(const std::filesystem::path &path, const RunReport &r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto &c = r.config;
  out << report_header() << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto &s : r.snapshots) {
    out << c.problem << ',' << c.model << ',' << c.k << ',' << ssp_name(c.scheme) << ','
        << policy_name(c.step.policy) << ',' << node_set_name(c.node_set) << ','
        << (c.bp_limiter ? "on" : "off") << ',' << fmt_double(c.tvb_m) << ',' << c.nx << ','
        << c.ny << ',' << fmt_double(s.time) << ',' << s.steps << ',' << fmt_double(s.min_avg)
        << ',' << fmt_double(s.max_avg) << ',' << fmt_double(s.min_pressure) << ','
        << fmt_double(s.errors ? s.errors->l1 : nan) << ','
        << fmt_double(s.errors ? s.errors->l2 : nan) << ','
        << fmt_double(s.errors ? s.errors->linf : nan) << ',' << s.limiter.cells_limited << ','
        << fmt_double(s.limiter.min_theta) << ',' << s.limiter.troubled_cells << ','
        << (r.bp_violation ? 1 : 0) << '\n';
  }
}

inline void write_run_errors(const std::filesystem::path &path, const RunReport &r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "time,l1,l2,linf\n";
  for (const auto &s : r.snapshots)
    if (s.errors)
      out << fmt_double(s.time) << ',' << fmt_double(s.errors->l1) << ','
          << fmt_double(s.errors->l2) << ',' << fmt_double(s.errors->linf) << '\n';
}

/// Project, step to every output time and then t_end, and collect the
/// report. Files are written only when output.dir is set. Admissibility
/// failures propagate as AdmissibilityError.
inline RunReport run(const RunConfig &cfg) {
  return dispatch_problem(cfg, [&](auto model, Mesh2D mesh, auto u0, auto exact) {
    using Model = decltype(model);
    const auto start = std::chrono::steady_clock::now();
    Solver<Model> solver(model, mesh, cfg.k, solver_options(cfg));
    solver.initialize(u0);

    RunReport r;
    r.config = cfg;
    const auto names = detail::component_names(cfg.model);
    std::filesystem::path dir;
    if (!cfg.output_dir.empty()) {
      dir = cfg.output_dir;
      std::filesystem::create_directories(dir);
    }

    auto snapshot = [&](double t) {
      Snapshot s;
      s.time = t;
      s.steps = solver.steps();
      s.min_avg = std::numeric_limits<double>::infinity();
      s.max_avg = -s.min_avg;
      const auto &f = solver.field();
      for (int c = 0; c < mesh.cells(); ++c) {
        const auto u = f.average(c);
        s.min_avg = std::min(s.min_avg, u[0]);
        s.max_avg = std::max(s.max_avg, u[0]);
        if constexpr (Model::kComponents == 4) {
          const double p = u[0] > 0.0 ? solver.op().model().pressure(u) : -INFINITY;
          s.min_pressure = std::isnan(s.min_pressure) ? p : std::min(s.min_pressure, p);
        }
      }
      if (exact) {
        const auto &ex = *exact;
        s.errors = solver.op().error_norms(f, [&](double x, double y) { return ex(x, y, t); });
      }
      s.limiter = solver.diagnostics();
      r.snapshots.push_back(s);
      if (!dir.empty()) write_field(dir / ("field_" + time_tag(t) + ".csv"), f, names);
    };

    auto on_step = [&] {
      if (r.first_dt == 0.0) r.first_dt = solver.last_dt();
      r.max_dt = std::max(r.max_dt, solver.last_dt());
      if (cfg.max_steps > 0 && solver.steps() >= cfg.max_steps && solver.time() < cfg.t_end)
        throw StepLimitReached("step limit of " + std::to_string(cfg.max_steps) +
                               " reached at t = " + fmt_double(solver.time()));
    };

    std::vector<double> targets = cfg.output_times;
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    if (targets.empty() || targets.back() < cfg.t_end) targets.push_back(cfg.t_end);
    for (double t : targets) {
      solver.advance_to(t, on_step);
      snapshot(t);
    }

    r.steps = solver.steps();
    r.limiter = solver.diagnostics();
    r.stage_bounds = solver.bounds();
    r.bp_violation = solver.bp_violation();
    r.last_speeds = solver.last_speeds();
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!dir.empty()) {
      write_report(dir / "report.csv", r);
      if (exact) write_run_errors(dir / "errors.csv", r);
    }
    return r;
  });
}

}  // namespace bpdg::harness

#endif  // BPDG_HARNESS_RUN_HPP_
