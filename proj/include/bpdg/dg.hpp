#ifndef BPDG_DG_HPP_
#define BPDG_DG_HPP_

// Modal DG discretization on a uniform Cartesian mesh: projection,
// evaluation, the weak-form semi-discrete residual with a global
// Lax-Friedrichs flux, and error norms.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpdg/basis.hpp"
#include "bpdg/errors.hpp"
#include "bpdg/mesh.hpp"
#include "bpdg/physics.hpp"
#include "bpdg/quadrature.hpp"

namespace bpdg {

/// Per-cell modal coefficients, laid out [cell][mode][component] with
/// cell = j * nx + i.
template <int M>
class DGField {
 public:
  using State = std::array<double, M>;

  DGField() = default;
  DGField(const Mesh2D &mesh, int k)
      : mesh_(mesh), k_(k), modes_((k + 1) * (k + 2) / 2),
        c_(static_cast<std::size_t>(mesh.cells()) * modes_ * M, 0.0) {}

  const Mesh2D &mesh() const { return mesh_; }
  int degree() const { return k_; }
  int modes() const { return modes_; }
  int stride() const { return modes_ * M; }

  double &operator()(int cell, int mode, int comp) {
    return c_[(static_cast<std::size_t>(cell) * modes_ + mode) * M + comp];
  }
  double operator()(int cell, int mode, int comp) const {
    return c_[(static_cast<std::size_t>(cell) * modes_ + mode) * M + comp];
  }
  double *cell(int c) { return c_.data() + static_cast<std::size_t>(c) * stride(); }
  const double *cell(int c) const { return c_.data() + static_cast<std::size_t>(c) * stride(); }

  State average(int cell) const {
    State s;
    for (int m = 0; m < M; ++m) s[m] = (*this)(cell, 0, m);
    return s;
  }
  State average(int i, int j) const { return average(mesh_.index(i, j)); }

  std::vector<double> &data() { return c_; }
  const std::vector<double> &data() const { return c_; }

 private:
  Mesh2D mesh_;
  int k_{0};
  int modes_{1};
  std::vector<double> c_;
};

/// Value of the cell polynomial at the given table row.
template <int M>
std::array<double, M> evaluate_row(const double *coef, const double *phi, int modes) {
  std::array<double, M> u{};
  for (int a = 0; a < modes; ++a)
    for (int m = 0; m < M; ++m) u[m] += coef[a * M + m] * phi[a];
  return u;
}

struct ErrorNorms {
  double l1{0.0};
  double l2{0.0};
  double linf{0.0};
};

template <typename Model>
class DGOperator {
 public:
  static constexpr int M = Model::kComponents;
  using State = typename Model::State;
  using Field = DGField<M>;

  DGOperator(Model model, Mesh2D mesh, int k)
      : model_(std::move(model)), mesh_(std::move(mesh)), basis_(k), k_(k),
        face_rule_(gauss_rule(k + 1)), volume_rule_(gauss_rule(k + 1)) {
    const int nm = basis_.size();
    const int q = face_rule_.size();
    const double dx = mesh_.dx(), dy = mesh_.dy();

    // Volume: u values and weighted gradients premultiplied by w / Delta.
    std::vector<std::array<double, 2>> vpts;
    std::vector<double> vw;
    for (std::size_t b = 0; b < volume_rule_.size(); ++b)
      for (std::size_t a = 0; a < volume_rule_.size(); ++a) {
        vpts.push_back({volume_rule_.nodes[a], volume_rule_.nodes[b]});
        vw.push_back(volume_rule_.weights[a] * volume_rule_.weights[b]);
      }
    volume_ = PointTable(basis_, vpts);
    vol_gx_.resize(vpts.size() * nm);
    vol_gy_.resize(vpts.size() * nm);
    for (std::size_t p = 0; p < vpts.size(); ++p)
      for (int a = 0; a < nm; ++a) {
        const auto g = basis_.gradient(a, vpts[p][0], vpts[p][1]);
        vol_gx_[p * nm + a] = vw[p] * g[0] / dx;
        vol_gy_[p * nm + a] = vw[p] * g[1] / dy;
      }

    // Faces in the order left, right, bottom, top.
    std::vector<std::array<double, 2>> fpts;
    for (int f = 0; f < 4; ++f)
      for (int i = 0; i < q; ++i) fpts.push_back(face_point(f, i));
    faces_ = PointTable(basis_, fpts);
    face_lift_.resize(fpts.size() * nm);
    for (int f = 0; f < 4; ++f) {
      const double sign = (f % 2 == 0) ? 1.0 : -1.0;
      const double spacing = f < 2 ? dx : dy;
      for (int i = 0; i < q; ++i)
        for (int a = 0; a < nm; ++a)
          face_lift_[(f * q + i) * nm + a] =
              sign * face_rule_.weights[i] * faces_.row(f * q + i)[a] / spacing;
    }

    trace_.resize(static_cast<std::size_t>(mesh_.cells()) * 4 * q * M);
    flux_x_.resize(static_cast<std::size_t>(mesh_.ny()) * (mesh_.nx() + 1) * q * M);
    flux_y_.resize(static_cast<std::size_t>(mesh_.nx()) * (mesh_.ny() + 1) * q * M);
  }

  const Model &model() const { return model_; }
  Model &model() { return model_; }
  const Mesh2D &mesh() const { return mesh_; }
  const Basis2D &basis() const { return basis_; }
  int degree() const { return k_; }
  const QuadratureRule1D &face_rule() const { return face_rule_; }

  /// Reference coordinates of trace point i on face f (left, right, bottom, top).
  std::array<double, 2> face_point(int f, int i) const {
    const double s = face_rule_.nodes[i];
    switch (f) {
      case 0: return {-0.5, s};
      case 1: return {0.5, s};
      case 2: return {s, -0.5};
      default: return {s, 0.5};
    }
  }

  /// The 4Q face trace points in face order.
  std::vector<std::array<double, 2>> face_points() const { return faces_.points; }

  Field make_field() const { return Field(mesh_, k_); }

  /// L2 projection of u0(x, y) -> State with a (k+2)^2 Gauss rule.
  template <typename F>
  Field project(F &&u0) const {
    Field field = make_field();
    const auto g = gauss_rule(k_ + 2);
    std::vector<std::array<double, 2>> pts;
    std::vector<double> w;
    for (std::size_t b = 0; b < g.size(); ++b)
      for (std::size_t a = 0; a < g.size(); ++a) {
        pts.push_back({g.nodes[a], g.nodes[b]});
        w.push_back(g.weights[a] * g.weights[b]);
      }
    const PointTable tab(basis_, pts);
    const int nm = basis_.size();
    for (int j = 0; j < mesh_.ny(); ++j)
      for (int i = 0; i < mesh_.nx(); ++i) {
        double *c = field.cell(mesh_.index(i, j));
        for (int p = 0; p < tab.size(); ++p) {
          const State u = u0(mesh_.center_x(i) + pts[p][0] * mesh_.dx(),
                             mesh_.center_y(j) + pts[p][1] * mesh_.dy());
          for (int a = 0; a < nm; ++a)
            for (int m = 0; m < M; ++m) c[a * M + m] += w[p] * tab.row(p)[a] * u[m];
        }
      }
    return field;
  }

  State evaluate(const Field &field, int i, int j, double xi, double eta) const {
    if (i < 0 || i >= mesh_.nx() || j < 0 || j >= mesh_.ny())
      throw std::out_of_range("evaluate: cell (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") outside the mesh");
    const int nm = basis_.size();
    std::vector<double> phi(nm);
    for (int a = 0; a < nm; ++a) phi[a] = basis_.value(a, xi, eta);
    return evaluate_row<M>(field.cell(mesh_.index(i, j)), phi.data(), nm);
  }

  /// Exterior state seen through a boundary face at coordinate `coord`
  /// along that side, given the interior trace.
  State ghost_state(Side side, double coord, const State &interior) const {
    const auto &bc = mesh_.bc(side);
    if (bc.prescribes(coord)) {
      State s;
      for (int m = 0; m < M; ++m) s[m] = bc.state.at(m);
      return s;
    }
    return interior;
  }

  /// Max wave speed per axis over the face traces, the extra points in
  /// `interior` (may be null) and boundary ghost states. Throws
  /// AdmissibilityError on an inadmissible node value.
  std::array<double, 2> max_speeds(const Field &field, const PointTable *interior) {
    compute_traces(field);
    return speeds_from_traces(field, interior);
  }

  /// Weak-form rate dc/dt for the given global Lax-Friedrichs coefficients.
  void residual(const Field &field, std::array<double, 2> alpha, Field &rate) {
    compute_traces(field);
    assemble(field, alpha, rate);
  }

  /// Residual with alpha taken from the current node values; returns alpha.
  std::array<double, 2> stage_residual(const Field &field, const PointTable *interior,
                                       Field &rate) {
    compute_traces(field);
    const auto alpha = speeds_from_traces(field, interior);
    assemble(field, alpha, rate);
    return alpha;
  }

  /// Domain-normalized L1, L2 and max errors against exact(x, y) on a
  /// (k+3)^2 Gauss rule per cell, summed over components.
  template <typename F>
  ErrorNorms error_norms(const Field &field, F &&exact) const {
    const auto g = gauss_rule(k_ + 3);
    std::vector<std::array<double, 2>> pts;
    std::vector<double> w;
    for (std::size_t b = 0; b < g.size(); ++b)
      for (std::size_t a = 0; a < g.size(); ++a) {
        pts.push_back({g.nodes[a], g.nodes[b]});
        w.push_back(g.weights[a] * g.weights[b]);
      }
    const PointTable tab(basis_, pts);
    ErrorNorms e;
    const double cell_frac = 1.0 / mesh_.cells();
    for (int j = 0; j < mesh_.ny(); ++j)
      for (int i = 0; i < mesh_.nx(); ++i) {
        const double *c = field.cell(mesh_.index(i, j));
        for (int p = 0; p < tab.size(); ++p) {
          const State u = evaluate_row<M>(c, tab.row(p), basis_.size());
          const State ue = exact(mesh_.center_x(i) + pts[p][0] * mesh_.dx(),
                                 mesh_.center_y(j) + pts[p][1] * mesh_.dy());
          for (int m = 0; m < M; ++m) {
            const double d = std::fabs(u[m] - ue[m]);
            e.l1 += cell_frac * w[p] * d;
            e.l2 += cell_frac * w[p] * d * d;
            e.linf = std::max(e.linf, d);
          }
        }
      }
    e.l2 = std::sqrt(e.l2);
    return e;
  }

  /// Trace of cell `cell` at face f, point q (valid after a residual or
  /// max_speeds call on the same field).
  State trace(int cell, int f, int q) const {
    State s;
    const double *t = trace_ptr(cell, f, q);
    for (int m = 0; m < M; ++m) s[m] = t[m];
    return s;
  }

 private:
  const double *trace_ptr(int cell, int f, int q) const {
    return trace_.data() +
           ((static_cast<std::size_t>(cell) * 4 + f) * face_rule_.size() + q) * M;
  }
  double *trace_ptr(int cell, int f, int q) {
    return trace_.data() +
           ((static_cast<std::size_t>(cell) * 4 + f) * face_rule_.size() + q) * M;
  }

  static State load(const double *p) {
    State s;
    for (int m = 0; m < M; ++m) s[m] = p[m];
    return s;
  }

  void compute_traces(const Field &field) {
    const int nm = basis_.size();
    const int q = face_rule_.size();
    for (int j = 0; j < mesh_.ny(); ++j)
      for (int i = 0; i < mesh_.nx(); ++i) {
        const int c = mesh_.index(i, j);
        const double *coef = field.cell(c);
        for (int p = 0; p < 4 * q; ++p) {
          const State u = evaluate_row<M>(coef, faces_.row(p), nm);
          if (!model_.admissible(u))
            throw AdmissibilityError("inadmissible trace value", i, j);
          double *t = trace_ptr(c, p / q, p % q);
          for (int m = 0; m < M; ++m) t[m] = u[m];
        }
      }
  }

  // Interior neighbour states across the boundary faces.
  State left_exterior(int j, int q) const {
    if (mesh_.periodic_x()) return load(trace_ptr(mesh_.index(mesh_.nx() - 1, j), 1, q));
    const double y = mesh_.center_y(j) + face_rule_.nodes[q] * mesh_.dy();
    return ghost_state(Side::kLeft, y, load(trace_ptr(mesh_.index(0, j), 0, q)));
  }
  State right_exterior(int j, int q) const {
    if (mesh_.periodic_x()) return load(trace_ptr(mesh_.index(0, j), 0, q));
    const double y = mesh_.center_y(j) + face_rule_.nodes[q] * mesh_.dy();
    return ghost_state(Side::kRight, y, load(trace_ptr(mesh_.index(mesh_.nx() - 1, j), 1, q)));
  }
  State bottom_exterior(int i, int q) const {
    if (mesh_.periodic_y()) return load(trace_ptr(mesh_.index(i, mesh_.ny() - 1), 3, q));
    const double x = mesh_.center_x(i) + face_rule_.nodes[q] * mesh_.dx();
    return ghost_state(Side::kBottom, x, load(trace_ptr(mesh_.index(i, 0), 2, q)));
  }
  State top_exterior(int i, int q) const {
    if (mesh_.periodic_y()) return load(trace_ptr(mesh_.index(i, 0), 2, q));
    const double x = mesh_.center_x(i) + face_rule_.nodes[q] * mesh_.dx();
    return ghost_state(Side::kTop, x, load(trace_ptr(mesh_.index(i, mesh_.ny() - 1), 3, q)));
  }

  std::array<double, 2> speeds_from_traces(const Field &field, const PointTable *interior) {
    std::array<double, 2> a{0.0, 0.0};
    auto account = [&](const State &u, int i, int j) {
      try {
        a[0] = std::max(a[0], model_.max_wave_speed(u, 0));
        a[1] = std::max(a[1], model_.max_wave_speed(u, 1));
      } catch (const AdmissibilityError &e) {
        throw AdmissibilityError(e.what(), i, j);
      }
    };
    const int q = face_rule_.size();
    const int nm = basis_.size();
    for (int j = 0; j < mesh_.ny(); ++j)
      for (int i = 0; i < mesh_.nx(); ++i) {
        const int c = mesh_.index(i, j);
        for (int p = 0; p < 4 * q; ++p) account(load(trace_ptr(c, p / q, p % q)), i, j);
        if (interior) {
          for (int p = 0; p < interior->size(); ++p) {
            const State u = evaluate_row<M>(field.cell(c), interior->row(p), nm);
            if (!model_.admissible(u))
              throw AdmissibilityError("inadmissible interior node value", i, j);
            account(u, i, j);
          }
        }
      }
    for (int s = 0; s < q; ++s) {
      if (!mesh_.periodic_x())
        for (int j = 0; j < mesh_.ny(); ++j) {
          account(left_exterior(j, s), 0, j);
          account(right_exterior(j, s), mesh_.nx() - 1, j);
        }
      if (!mesh_.periodic_y())
        for (int i = 0; i < mesh_.nx(); ++i) {
          account(bottom_exterior(i, s), i, 0);
          account(top_exterior(i, s), i, mesh_.ny() - 1);
        }
    }
    return a;
  }

  void assemble(const Field &field, std::array<double, 2> alpha, Field &rate) {
    const int nx = mesh_.nx(), ny = mesh_.ny();
    const int q = face_rule_.size();
    const int nm = basis_.size();

    // x-normal faces: face f of row j sits between cells f-1 and f.
    for (int j = 0; j < ny; ++j)
      for (int f = 0; f <= nx; ++f)
        for (int s = 0; s < q; ++s) {
          const State ul = f > 0 ? load(trace_ptr(mesh_.index(f - 1, j), 1, s)) : left_exterior(j, s);
          const State ur = f < nx ? load(trace_ptr(mesh_.index(f, j), 0, s)) : right_exterior(j, s);
          const State F = lax_friedrichs_flux(model_, ul, ur, 0, alpha[0]);
          double *out = flux_x_.data() + ((static_cast<std::size_t>(j) * (nx + 1) + f) * q + s) * M;
          for (int m = 0; m < M; ++m) out[m] = F[m];
        }
    for (int f = 0; f <= ny; ++f)
      for (int i = 0; i < nx; ++i)
        for (int s = 0; s < q; ++s) {
          const State ub = f > 0 ? load(trace_ptr(mesh_.index(i, f - 1), 3, s)) : bottom_exterior(i, s);
          const State ut = f < ny ? load(trace_ptr(mesh_.index(i, f), 2, s)) : top_exterior(i, s);
          const State F = lax_friedrichs_flux(model_, ub, ut, 1, alpha[1]);
          double *out = flux_y_.data() + ((static_cast<std::size_t>(f) * nx + i) * q + s) * M;
          for (int m = 0; m < M; ++m) out[m] = F[m];
        }

    if (rate.data().size() != field.data().size()) rate = make_field();
    const int nv = volume_.size();
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int c = mesh_.index(i, j);
        const double *coef = field.cell(c);
        double *r = rate.cell(c);
        std::fill(r, r + nm * M, 0.0);
        for (int p = 0; p < nv; ++p) {
          const State u = evaluate_row<M>(coef, volume_.row(p), nm);
          const State f1 = model_.flux(u, 0);
          const State f2 = model_.flux(u, 1);
          for (int m = 0; m < M; ++m)
            if (!std::isfinite(f1[m]) || !std::isfinite(f2[m]))
              throw AdmissibilityError("non-finite flux at a volume point", i, j);
          const double *gx = vol_gx_.data() + static_cast<std::size_t>(p) * nm;
          const double *gy = vol_gy_.data() + static_cast<std::size_t>(p) * nm;
          for (int a = 0; a < nm; ++a)
            for (int m = 0; m < M; ++m) r[a * M + m] += f1[m] * gx[a] + f2[m] * gy[a];
        }
        const double *face_flux[4] = {
            flux_x_.data() + (static_cast<std::size_t>(j) * (nx + 1) + i) * q * M,
            flux_x_.data() + (static_cast<std::size_t>(j) * (nx + 1) + i + 1) * q * M,
            flux_y_.data() + (static_cast<std::size_t>(j) * nx + i) * q * M,
            flux_y_.data() + (static_cast<std::size_t>(j + 1) * nx + i) * q * M};
        for (int f = 0; f < 4; ++f)
          for (int s = 0; s < q; ++s) {
            const double *F = face_flux[f] + s * M;
            const double *lift = face_lift_.data() + static_cast<std::size_t>(f * q + s) * nm;
            for (int a = 0; a < nm; ++a)
              for (int m = 0; m < M; ++m) r[a * M + m] += lift[a] * F[m];
          }
      }
  }

  Model model_;
  Mesh2D mesh_;
  Basis2D basis_;
  int k_;
  QuadratureRule1D face_rule_;
  QuadratureRule1D volume_rule_;
  PointTable volume_;
  PointTable faces_;
  std::vector<double> vol_gx_, vol_gy_;
  std::vector<double> face_lift_;
  std::vector<double> trace_;
  std::vector<double> flux_x_, flux_y_;
};

}  // namespace bpdg

#endif  // BPDG_DG_HPP_
