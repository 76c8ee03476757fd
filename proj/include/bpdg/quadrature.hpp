#ifndef BPDG_QUADRATURE_HPP_
#define BPDG_QUADRATURE_HPP_

// One-dimensional Gauss and Gauss-Lobatto rules on the reference interval
// [-1/2, 1/2] with weights normalized to sum 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpdg {

enum class QuadratureKind { kGauss, kGaussLobatto };

struct QuadratureRule1D {
  QuadratureKind kind{QuadratureKind::kGauss};
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

// Legendre P_n and P_{n-1} at x in [-1, 1] by the three-term recurrence.
inline void legendre_pair(int n, long double x, long double &pn,
                          long double &pn_1) {
  long double p0 = 1.0L, p1 = x;
  if (n == 0) {
    pn = 1.0L;
    pn_1 = 0.0L;
    return;
  }
  for (int m = 2; m <= n; ++m) {
    long double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  pn_1 = p0;
}

inline void symmetrize(QuadratureRule1D &rule) {
  const std::size_t n = rule.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
}

}  // namespace detail

/// Q-point Gauss-Legendre rule, exact for degree 2Q-1. Valid for 1 <= Q <= 16.
inline QuadratureRule1D gauss_rule(int points) {
  if (points < 1 || points > 16)
    throw std::invalid_argument("gauss_rule: point count " +
                                std::to_string(points) + " outside [1, 16]");
  QuadratureRule1D rule;
  rule.kind = QuadratureKind::kGauss;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const int n = points;
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess, descending roots.
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) /
                             (n + 0.5L));
    long double pn = 0, pn_1 = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      detail::legendre_pair(n, x, pn, pn_1);
      dp = n * (x * pn - pn_1) / (x * x - 1.0L);
      const long double dx = pn / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15L) break;
    }
    detail::legendre_pair(n, x, pn, pn_1);
    dp = n * (x * pn - pn_1) / (x * x - 1.0L);
    const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    // Map [-1,1] -> [-1/2,1/2]; weights sum 2 -> 1.
    rule.nodes[n - 1 - i] = static_cast<double>(0.5L * x);
    rule.weights[n - 1 - i] = static_cast<double>(0.5L * w);
  }
  detail::symmetrize(rule);
  return rule;
}

/// L-point Gauss-Lobatto rule, exact for degree 2L-3, endpoint weight
/// 1/(L(L-1)). Valid for 2 <= L <= 16.
inline QuadratureRule1D gauss_lobatto_rule(int points) {
  if (points < 2 || points > 16)
    throw std::invalid_argument("gauss_lobatto_rule: point count " +
                                std::to_string(points) + " outside [2, 16]");
  QuadratureRule1D rule;
  rule.kind = QuadratureKind::kGaussLobatto;
  const int n = points - 1;  // interior nodes are roots of P_n'
  rule.nodes.assign(points, 0.0);
  rule.weights.assign(points, 0.0);
  const long double endpoint = 1.0L / (static_cast<long double>(points) * n);
  rule.nodes.front() = -0.5;
  rule.nodes.back() = 0.5;
  rule.weights.front() = static_cast<double>(endpoint);
  rule.weights.back() = static_cast<double>(endpoint);
  for (int i = 1; i < n; ++i) {
    long double x = -std::cos(std::numbers::pi_v<long double> * i / n);
    long double pn = 0, pn_1 = 0;
    for (int it = 0; it < 100; ++it) {
      detail::legendre_pair(n, x, pn, pn_1);
      // P_n' and P_n'' from the Legendre ODE.
      const long double d1 = n * (x * pn - pn_1) / (x * x - 1.0L);
      const long double d2 = (2.0L * x * d1 - n * (n + 1.0L) * pn) /
                             (1.0L - x * x);
      const long double dx = d1 / d2;
      x -= dx;
      if (std::fabs(dx) < 1e-15L) break;
    }
    detail::legendre_pair(n, x, pn, pn_1);
    rule.nodes[i] = static_cast<double>(0.5L * x);
    rule.weights[i] = static_cast<double>(endpoint / (pn * pn));
  }
  detail::symmetrize(rule);
  return rule;
}

/// Exact mean of x^m over [-1/2, 1/2].
inline double monomial_mean(int m) noexcept {
  if (m % 2 == 1) return 0.0;
  return std::pow(0.5, m) / (m + 1);
}

/// Largest monomial defect |sum_i w_i x_i^m - mean(x^m)| over 0 <= m <= degree.
inline double exactness_defect(const QuadratureRule1D &rule, int degree) {
  double worst = 0.0;
  for (int m = 0; m <= degree; ++m) {
    long double sum = 0.0L;
    for (std::size_t i = 0; i < rule.size(); ++i)
      sum += static_cast<long double>(rule.weights[i]) *
             std::pow(static_cast<long double>(rule.nodes[i]), m);
    worst = std::max(worst, static_cast<double>(
                                std::fabs(sum - monomial_mean(m))));
  }
  return worst;
}

}  // namespace bpdg

#endif  // BPDG_QUADRATURE_HPP_
