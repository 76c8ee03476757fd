#ifndef BPDG_MESH_HPP_
#define BPDG_MESH_HPP_

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpdg {

enum class Side { kLeft = 0, kRight = 1, kBottom = 2, kTop = 3 };

enum class BoundaryKind { kPeriodic, kOutflow, kInflowSegment };

/// Boundary treatment for one side of the domain. An inflow segment
/// prescribes `state` on [seg_lo, seg_hi] (coordinate along the side) and
/// falls back to outflow elsewhere.
struct BoundaryCondition {
  BoundaryKind kind{BoundaryKind::kPeriodic};
  double seg_lo{0.0};
  double seg_hi{0.0};
  std::vector<double> state;

  static BoundaryCondition periodic() { return {}; }
  static BoundaryCondition outflow() { return {BoundaryKind::kOutflow, 0.0, 0.0, {}}; }
  static BoundaryCondition inflow(double lo, double hi, std::vector<double> s) {
    if (!(lo <= hi)) throw std::invalid_argument("inflow segment: need lo <= hi");
    return {BoundaryKind::kInflowSegment, lo, hi, std::move(s)};
  }

  bool prescribes(double coord) const {
    return kind == BoundaryKind::kInflowSegment && seg_lo <= coord && coord <= seg_hi;
  }
};

class Mesh2D {
 public:
  Mesh2D() = default;
  Mesh2D(double x_lo, double x_hi, double y_lo, double y_hi, int nx, int ny,
         std::array<BoundaryCondition, 4> bc = {})
      : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi), nx_(nx), ny_(ny),
        bc_(std::move(bc)) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("Mesh2D: need nx, ny >= 1");
    if (!(x_hi > x_lo) || !(y_hi > y_lo))
      throw std::invalid_argument("Mesh2D: empty domain");
    auto periodic = [&](Side s) { return bc_[int(s)].kind == BoundaryKind::kPeriodic; };
    if (periodic(Side::kLeft) != periodic(Side::kRight) ||
        periodic(Side::kBottom) != periodic(Side::kTop))
      throw std::invalid_argument("Mesh2D: periodic sides must come in pairs");
  }

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  double y_lo() const { return y_lo_; }
  double y_hi() const { return y_hi_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int cells() const { return nx_ * ny_; }
  double dx() const { return (x_hi_ - x_lo_) / nx_; }
  double dy() const { return (y_hi_ - y_lo_) / ny_; }
  double area() const { return (x_hi_ - x_lo_) * (y_hi_ - y_lo_); }
  double center_x(int i) const { return x_lo_ + (i + 0.5) * dx(); }
  double center_y(int j) const { return y_lo_ + (j + 0.5) * dy(); }
  int index(int i, int j) const { return j * nx_ + i; }

  const BoundaryCondition &bc(Side s) const { return bc_[int(s)]; }
  bool periodic_x() const { return bc_[0].kind == BoundaryKind::kPeriodic; }
  bool periodic_y() const { return bc_[2].kind == BoundaryKind::kPeriodic; }

 private:
  double x_lo_{0.0}, x_hi_{1.0}, y_lo_{0.0}, y_hi_{1.0};
  int nx_{1}, ny_{1};
  std::array<BoundaryCondition, 4> bc_{};
};

}  // namespace bpdg

#endif  // BPDG_MESH_HPP_
