#ifndef BPDG_LIMITERS_HPP_
#define BPDG_LIMITERS_HPP_

// Bound-preserving scaling limiter on a decomposition node set, and a TVB
// minmod limiter for oscillation control.

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

#include "bpdg/basis.hpp"
#include "bpdg/decomposition.hpp"
#include "bpdg/dg.hpp"
#include "bpdg/errors.hpp"
#include "bpdg/mesh.hpp"
#include "bpdg/physics.hpp"

namespace bpdg {

/// Reference points where the limiter enforces the region: the 4Q face
/// Gauss traces first, then the decomposition's internal nodes.
struct LimiterNodeSet {
  std::vector<std::array<double, 2>> points;
  int face_points{0};

  int size() const { return static_cast<int>(points.size()); }
  int internal_points() const { return size() - face_points; }

  /// Only the internal nodes (the face traces are covered by the residual).
  std::vector<std::array<double, 2>> internal() const {
    return {points.begin() + face_points, points.end()};
  }
};

inline LimiterNodeSet build_node_set(const ConvexDecomposition &d, int k) {
  if (d.dim != 2) throw std::invalid_argument("build_node_set: decomposition must be 2D");
  const auto g = gauss_rule(k + 1);
  LimiterNodeSet s;
  for (double side : {-0.5, 0.5})
    for (double t : g.nodes) s.points.push_back({side, t});
  for (double side : {-0.5, 0.5})
    for (double t : g.nodes) s.points.push_back({t, side});
  s.face_points = s.size();
  for (const auto &n : d.internal_nodes) {
    const std::array<double, 2> p{n.offset[0], n.offset[1]};
    bool dup = false;
    for (const auto &q : s.points)
      dup = dup || (std::fabs(p[0] - q[0]) <= 1e-14 && std::fabs(p[1] - q[1]) <= 1e-14);
    if (!dup) s.points.push_back(p);
  }
  return s;
}

struct LimiterDiagnostics {
  long cells_limited{0};
  double min_theta{1.0};
  long troubled_cells{0};

  void merge(const LimiterDiagnostics &o) {
    cells_limited += o.cells_limited;
    min_theta = std::min(min_theta, o.min_theta);
    troubled_cells += o.troubled_cells;
  }
};

namespace detail {

inline void scale_high_modes(double *coef, int modes, int comps, double theta, int comp = -1) {
  for (int a = 1; a < modes; ++a)
    for (int m = 0; m < comps; ++m)
      if (comp < 0 || m == comp) coef[a * comps + m] *= theta;
}

template <int M>
void limit_box_cell(double *coef, int modes, const PointTable &nodes, const BoxRegion &g,
                    int i, int j, LimiterDiagnostics &diag) {
  const double ubar = coef[0];
  const double scale = std::max({1.0, std::fabs(g.lo), std::fabs(g.hi)});
  if (!(ubar >= g.lo - 1e-12 * scale && ubar <= g.hi + 1e-12 * scale))
    throw AdmissibilityError("cell average " + std::to_string(ubar) +
                                 " outside the invariant region",
                             i, j);
  double vmax = -INFINITY, vmin = INFINITY;
  for (int p = 0; p < nodes.size(); ++p) {
    const double v = evaluate_row<M>(coef, nodes.row(p), modes)[0];
    vmax = std::max(vmax, v);
    vmin = std::min(vmin, v);
  }
  const double slack = 4.0 * DBL_EPSILON * scale;
  double theta = 1.0;
  if (vmax > g.hi + slack) theta = std::min(theta, (g.hi - ubar) / (vmax - ubar));
  if (vmin < g.lo - slack) theta = std::min(theta, (ubar - g.lo) / (ubar - vmin));
  theta = std::clamp(theta, 0.0, 1.0);
  if (theta < 1.0) {
    scale_high_modes(coef, modes, M, theta);
    ++diag.cells_limited;
    diag.min_theta = std::min(diag.min_theta, theta);
  }
}

/// rho E - |m|^2 / 2 - floor * rho / (gamma - 1): nonnegative exactly when
/// the pressure is at least `floor` (for rho > 0), and concave in u.
inline double pressure_excess(const std::array<double, 4> &u, double gamma, double floor) {
  return u[0] * u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) - floor * u[0] / (gamma - 1.0);
}

inline void limit_euler_cell(double *coef, int modes, const PointTable &nodes,
                             const Euler &model, int i, int j, LimiterDiagnostics &diag) {
  constexpr int M = 4;
  const std::array<double, 4> ubar{coef[0], coef[1], coef[2], coef[3]};
  bool finite = true;
  for (double c : ubar) finite = finite && std::isfinite(c);
  if (!finite || !(ubar[0] > 0.0) || !(model.pressure(ubar) > 0.0))
    throw AdmissibilityError("cell average outside the invariant region (rho = " +
                                 std::to_string(ubar[0]) + ")",
                             i, j);
  const double pbar = model.pressure(ubar);
  const double eps_rho = std::min(model.region.eps_rho, ubar[0]);
  const double eps_p = std::min(model.region.eps_p, pbar);

  // Density: the limited nodes aim slightly above the floor so that
  // re-evaluating the scaled polynomial cannot round back below it.
  double rho_min = INFINITY;
  for (int p = 0; p < nodes.size(); ++p)
    rho_min = std::min(rho_min, evaluate_row<M>(coef, nodes.row(p), modes)[0]);
  double theta1 = 1.0;
  if (rho_min < eps_rho) {
    const double target = std::min(eps_rho + 64.0 * DBL_EPSILON * ubar[0], ubar[0]);
    theta1 = std::clamp((ubar[0] - target) / (ubar[0] - rho_min), 0.0, 1.0);
    scale_high_modes(coef, modes, M, theta1, 0);
  }

  // Pressure: bisection for the largest admissible t on each violating
  // segment from the average to the node.
  const double energy_scale = std::fabs(ubar[3]) + 1.0;
  const double target_p =
      std::min(eps_p + 64.0 * DBL_EPSILON * (model.gamma - 1.0) * energy_scale, pbar);
  double theta2 = 1.0;
  for (int p = 0; p < nodes.size(); ++p) {
    const auto u = evaluate_row<M>(coef, nodes.row(p), modes);
    if (u[0] > 0.0 && model.pressure(u) >= eps_p) continue;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-14) {
      const double t = 0.5 * (lo + hi);
      std::array<double, 4> v;
      for (int m = 0; m < 4; ++m) v[m] = ubar[m] + t * (u[m] - ubar[m]);
      if (pressure_excess(v, model.gamma, target_p) >= 0.0)
        lo = t;
      else
        hi = t;
    }
    theta2 = std::min(theta2, lo);
  }
  if (theta2 < 1.0) scale_high_modes(coef, modes, M, theta2);
  if (theta1 < 1.0 || theta2 < 1.0) {
    ++diag.cells_limited;
    diag.min_theta = std::min({diag.min_theta, theta1, theta2});
  }
}

}  // namespace detail

/// Scales each cell polynomial toward its average, p -> ubar + theta (p - ubar),
/// with the largest theta in [0, 1] that puts every node value in the
/// model's region. Throws AdmissibilityError if a cell average is outside.
template <typename Model>
LimiterDiagnostics bp_scaling_limit(DGField<Model::kComponents> &field, const Model &model,
                                    const PointTable &nodes) {
  LimiterDiagnostics diag;
  const auto &mesh = field.mesh();
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      double *coef = field.cell(mesh.index(i, j));
      if constexpr (std::is_same_v<typename Model::Region, BoxRegion>) {
        detail::limit_box_cell<Model::kComponents>(coef, field.modes(), nodes, model.region,
                                                   i, j, diag);
      } else {
        detail::limit_euler_cell(coef, field.modes(), nodes, model, i, j, diag);
      }
    }
  return diag;
}

namespace detail {

inline double minmod(double a, double b, double c) {
  if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
  if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
  return 0.0;
}

/// Neighbour cell average across a side; boundaries use the ghost rule of
/// the side (wrap, copy, or the prescribed inflow state).
template <int M>
double neighbour_mean(const DGField<M> &field, int i, int j, Side side, int comp) {
  const auto &mesh = field.mesh();
  int ni = i, nj = j;
  double coord = 0.0;
  switch (side) {
    case Side::kLeft: ni = i - 1; coord = mesh.center_y(j); break;
    case Side::kRight: ni = i + 1; coord = mesh.center_y(j); break;
    case Side::kBottom: nj = j - 1; coord = mesh.center_x(i); break;
    case Side::kTop: nj = j + 1; coord = mesh.center_x(i); break;
  }
  const bool outside = ni < 0 || ni >= mesh.nx() || nj < 0 || nj >= mesh.ny();
  if (!outside) return field(mesh.index(ni, nj), 0, comp);
  const auto &bc = mesh.bc(side);
  if (bc.kind == BoundaryKind::kPeriodic) {
    ni = (ni + mesh.nx()) % mesh.nx();
    nj = (nj + mesh.ny()) % mesh.ny();
    return field(mesh.index(ni, nj), 0, comp);
  }
  if (bc.prescribes(coord)) return bc.state.at(comp);
  return field(mesh.index(i, j), 0, comp);
}

}  // namespace detail

/// Component-wise TVB minmod limiter on the linear modes. The half-cell
/// increment carried by a linear mode c is sqrt(3) c; it is compared with
/// the neighbouring mean differences unless it is below M_tvb * Delta^2.
/// In a troubled component the modes above degree 1 are dropped and the
/// linear modes replaced by the limited increments.
template <int M>
LimiterDiagnostics tvb_minmod_limit(DGField<M> &field, double m_tvb) {
  LimiterDiagnostics diag;
  if (field.degree() < 1) return diag;
  const auto &mesh = field.mesh();
  const double s3 = std::sqrt(3.0);
  const double dead_x = m_tvb * mesh.dx() * mesh.dx();
  const double dead_y = m_tvb * mesh.dy() * mesh.dy();
  const int nm = field.modes();

  // Work from the unmodified averages; averages never change, so reading
  // them from the field while writing higher modes is safe.
  std::vector<double> new_lin(static_cast<std::size_t>(mesh.cells()) * 2 * M);
  std::vector<char> troubled(static_cast<std::size_t>(mesh.cells()) * M, 0);
  auto limited = [](double a, double b, double c, double dead) {
    return std::fabs(a) <= dead ? a : detail::minmod(a, b, c);
  };
  for (int j = 0; j < mesh.ny(); ++j)
    for (int i = 0; i < mesh.nx(); ++i) {
      const int cell = mesh.index(i, j);
      for (int m = 0; m < M; ++m) {
        const double ubar = field(cell, 0, m);
        const double tx = s3 * field(cell, 1, m);
        const double ty = s3 * field(cell, 2, m);
        const double fx = detail::neighbour_mean(field, i, j, Side::kRight, m) - ubar;
        const double bx = ubar - detail::neighbour_mean(field, i, j, Side::kLeft, m);
        const double fy = detail::neighbour_mean(field, i, j, Side::kTop, m) - ubar;
        const double by = ubar - detail::neighbour_mean(field, i, j, Side::kBottom, m);
        const double lx = limited(tx, fx, bx, dead_x);
        const double ly = limited(ty, fy, by, dead_y);
        new_lin[(static_cast<std::size_t>(cell) * M + m) * 2] = lx;
        new_lin[(static_cast<std::size_t>(cell) * M + m) * 2 + 1] = ly;
        troubled[static_cast<std::size_t>(cell) * M + m] = (lx != tx || ly != ty);
      }
    }
  for (int c = 0; c < mesh.cells(); ++c) {
    bool any = false;
    for (int m = 0; m < M; ++m) {
      if (!troubled[static_cast<std::size_t>(c) * M + m]) continue;
      any = true;
      field(c, 1, m) = new_lin[(static_cast<std::size_t>(c) * M + m) * 2] / s3;
      field(c, 2, m) = new_lin[(static_cast<std::size_t>(c) * M + m) * 2 + 1] / s3;
      for (int a = 3; a < nm; ++a) field(c, a, m) = 0.0;
    }
    if (any) ++diag.troubled_cells;
  }
  return diag;
}

}  // namespace bpdg

#endif  // BPDG_LIMITERS_HPP_
