#ifndef BPDG_BASIS_HPP_
#define BPDG_BASIS_HPP_

// Orthonormal modal basis of total degree <= k on the reference cell
// [-1/2, 1/2]^2 under the cell-mean inner product. Mode (a, b) is
// sqrt(2a+1) P_a(2 xi) * sqrt(2b+1) P_b(2 eta); mode 0 is the constant 1,
// so its coefficient is the cell average. Ordered by total degree, and
// within a degree by decreasing xi power, which is what Gram-Schmidt on the
// monomials 1, xi, eta, xi^2, xi eta, eta^2, ... produces.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpdg {

namespace detail {

/// sqrt(2a+1) P_a(2s) and its s-derivative.
inline void scaled_legendre(int a, double s, double &value, double &deriv) {
  const double x = 2.0 * s;
  double p0 = 1.0, p1 = x, d0 = 0.0, d1 = 1.0;
  if (a == 0) {
    p1 = 1.0;
    d1 = 0.0;
  }
  for (int m = 2; m <= a; ++m) {
    const double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
    const double d2 = d0 + (2 * m - 1) * p1;  // P_m' = P_{m-2}' + (2m-1) P_{m-1}
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  const double scale = std::sqrt(2.0 * a + 1.0);
  value = scale * p1;
  deriv = 2.0 * scale * d1;
}

}  // namespace detail

class Basis2D {
 public:
  explicit Basis2D(int k = 2) : k_(k) {
    if (k < 0 || k > 6) throw std::invalid_argument("Basis2D: degree " + std::to_string(k));
    for (int d = 0; d <= k; ++d)
      for (int a = d; a >= 0; --a) powers_.push_back({a, d - a});
  }

  int degree() const { return k_; }
  int size() const { return static_cast<int>(powers_.size()); }
  std::array<int, 2> powers(int mode) const { return powers_.at(mode); }

  double value(int mode, double xi, double eta) const {
    double vx, dx, vy, dy;
    detail::scaled_legendre(powers_[mode][0], xi, vx, dx);
    detail::scaled_legendre(powers_[mode][1], eta, vy, dy);
    return vx * vy;
  }

  /// d/dxi and d/deta of a mode (reference coordinates).
  std::array<double, 2> gradient(int mode, double xi, double eta) const {
    double vx, dx, vy, dy;
    detail::scaled_legendre(powers_[mode][0], xi, vx, dx);
    detail::scaled_legendre(powers_[mode][1], eta, vy, dy);
    return {dx * vy, vx * dy};
  }

 private:
  int k_;
  std::vector<std::array<int, 2>> powers_;
};

/// Basis values at a fixed list of reference points, row-major [point][mode].
struct PointTable {
  std::vector<std::array<double, 2>> points;
  std::vector<double> phi;
  int modes{0};

  PointTable() = default;
  PointTable(const Basis2D &basis, std::vector<std::array<double, 2>> pts)
      : points(std::move(pts)), modes(basis.size()) {
    phi.resize(points.size() * modes);
    for (std::size_t p = 0; p < points.size(); ++p)
      for (int a = 0; a < modes; ++a)
        phi[p * modes + a] = basis.value(a, points[p][0], points[p][1]);
  }

  int size() const { return static_cast<int>(points.size()); }
  const double *row(int p) const { return phi.data() + static_cast<std::size_t>(p) * modes; }
};

}  // namespace bpdg

#endif  // BPDG_BASIS_HPP_
