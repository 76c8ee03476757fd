#ifndef BPDG_DECOMPOSITION_HPP_
#define BPDG_DECOMPOSITION_HPP_

// Convex decompositions of the cell average on Cartesian cells.
//
// A decomposition writes the cell mean of any p in P^k as
//
//   sum_axis [ w_axis^- <p on the lower face> + w_axis^+ <p on the upper face> ]
//     + sum_s w_s p(node_s),
//
// where <.> is the transverse tensor-Gauss average over a face and every
// weight is positive. Coordinates are cell-width units on [-1/2, 1/2]^dim.
// The smallest face weight per axis fixes the bound-preserving time step.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpdg/quadrature.hpp"

namespace bpdg {

/// Per-axis ratios phi_i = a_i / Delta_i (units 1/time).
class SpeedRatios {
 public:
  SpeedRatios() = default;
  SpeedRatios(std::initializer_list<double> phi)
      : SpeedRatios(std::vector<double>(phi)) {}
  explicit SpeedRatios(std::vector<double> phi) : phi_(std::move(phi)) {
    if (phi_.size() != 2 && phi_.size() != 3)
      throw std::invalid_argument("SpeedRatios: need 2 or 3 axes");
    for (double p : phi_)
      if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("SpeedRatios: ratios must be positive");
  }

  /// Ratios from raw speeds and spacings.
  static SpeedRatios from_speeds(std::span<const double> speeds,
                                 std::span<const double> spacings) {
    std::vector<double> phi(speeds.size());
    for (std::size_t i = 0; i < speeds.size(); ++i)
      phi[i] = speeds[i] / spacings[i];
    return SpeedRatios(std::move(phi));
  }

  int dim() const noexcept { return static_cast<int>(phi_.size()); }
  double operator[](int axis) const { return phi_.at(axis); }
  std::span<const double> values() const noexcept { return phi_; }
  double max() const { return *std::max_element(phi_.begin(), phi_.end()); }
  double sum() const {
    double s = 0.0;
    for (double p : phi_) s += p;
    return s;
  }
  /// psi = sum_i phi_i + 2 phi_*.
  double psi() const { return sum() + 2.0 * max(); }

 private:
  std::vector<double> phi_;
};

enum class DecompositionScheme { kOptimal, kZhangShu, kJiangLiu, kCustom };

inline std::string scheme_name(DecompositionScheme s) {
  switch (s) {
    case DecompositionScheme::kOptimal: return "optimal";
    case DecompositionScheme::kZhangShu: return "zhang-shu";
    case DecompositionScheme::kJiangLiu: return "jiang-liu";
    case DecompositionScheme::kCustom: return "custom";
  }
  return "unknown";
}

struct FaceWeights {
  double minus{0.0};
  double plus{0.0};
  double min() const noexcept { return std::min(minus, plus); }
};

struct InternalNode {
  std::array<double, 3> offset{0.0, 0.0, 0.0};
  double weight{0.0};
};

struct ConvexDecomposition {
  int dim{2};
  int degree{2};
  DecompositionScheme scheme{DecompositionScheme::kCustom};
  std::vector<FaceWeights> face_weights;  // one entry per axis
  QuadratureRule1D transverse_rule;       // Gauss rule on each face axis
  std::vector<InternalNode> internal_nodes;

  double total_weight() const {
    double s = 0.0;
    for (const auto &f : face_weights) s += f.minus + f.plus;
    for (const auto &n : internal_nodes) s += n.weight;
    return s;
  }
};

class UnsupportedDegree : public std::invalid_argument {
 public:
  explicit UnsupportedDegree(int k)
      : std::invalid_argument("decomposition: degree " + std::to_string(k) +
                              " unsupported (only 2 and 3)") {}
};

namespace detail {

inline void require_degree(int k) {
  if (k != 2 && k != 3) throw UnsupportedDegree(k);
}

inline void require_dim(const SpeedRatios &r, int dim, const char *who) {
  if (r.dim() != dim)
    throw std::invalid_argument(std::string(who) + ": expected " +
                                std::to_string(dim) + " speed ratios");
}

/// Merge nodes closer than tol (max-norm), summing weights. Stable order.
inline std::vector<InternalNode> merge_nodes(std::vector<InternalNode> nodes,
                                             double tol = 1e-14) {
  std::vector<InternalNode> out;
  out.reserve(nodes.size());
  for (const auto &n : nodes) {
    bool merged = false;
    for (auto &m : out) {
      double d = 0.0;
      for (int a = 0; a < 3; ++a)
        d = std::max(d, std::fabs(m.offset[a] - n.offset[a]));
      if (d <= tol) {
        m.weight += n.weight;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(n);
  }
  return out;
}

/// Visit every point of the (dim-1)-fold tensor rule on the face normal to
/// `axis` at coordinate `side`, passing (point, weight).
template <typename Fn>
void for_each_face_point(const QuadratureRule1D &g, int dim, int axis,
                         double side, Fn &&fn) {
  const std::size_t q = g.size();
  std::size_t total = 1;
  for (int d = 1; d < dim; ++d) total *= q;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    double w = 1.0;
    std::size_t rem = idx;
    for (int d = 0; d < dim; ++d) {
      if (d == axis) {
        x[d] = side;
        continue;
      }
      const std::size_t i = rem % q;
      rem /= q;
      x[d] = g.nodes[i];
      w *= g.weights[i];
    }
    fn(x, w);
  }
}

/// Tensor Gauss-Lobatto x Gauss decomposition with axis mixing weights kappa.
inline ConvexDecomposition classic(int k, std::span<const double> kappa,
                                   DecompositionScheme scheme) {
  require_degree(k);
  const int dim = static_cast<int>(kappa.size());
  const int lobatto_points = (k + 4) / 2;  // ceil((k+3)/2)
  const auto gl = gauss_lobatto_rule(lobatto_points);
  ConvexDecomposition d;
  d.dim = dim;
  d.degree = k;
  d.scheme = scheme;
  d.transverse_rule = gauss_rule(k + 1);
  std::vector<InternalNode> raw;
  for (int axis = 0; axis < dim; ++axis) {
    d.face_weights.push_back(
        {kappa[axis] * gl.weights.front(), kappa[axis] * gl.weights.back()});
    for (int s = 1; s + 1 < lobatto_points; ++s) {
      for_each_face_point(d.transverse_rule, dim, axis, gl.nodes[s],
                          [&](const std::array<double, 3> &x, double w) {
                            raw.push_back(
                                {x, kappa[axis] * gl.weights[s] * w});
                          });
    }
  }
  d.internal_nodes = merge_nodes(std::move(raw));
  return d;
}

}  // namespace detail

/// Zhang-Shu decomposition: x- and y-ordered tensor rules mixed by
/// kappa_i = phi_i / sum(phi). Works in 2D or 3D depending on `ratios`.
inline ConvexDecomposition zhang_shu(int k, const SpeedRatios &ratios) {
  std::vector<double> kappa(ratios.dim());
  for (int i = 0; i < ratios.dim(); ++i) kappa[i] = ratios[i] / ratios.sum();
  return detail::classic(k, kappa, DecompositionScheme::kZhangShu);
}

inline ConvexDecomposition zhang_shu_2d(int k, const SpeedRatios &ratios) {
  detail::require_dim(ratios, 2, "zhang_shu_2d");
  return zhang_shu(k, ratios);
}

inline ConvexDecomposition zhang_shu_3d(int k, const SpeedRatios &ratios) {
  detail::require_dim(ratios, 3, "zhang_shu_3d");
  return zhang_shu(k, ratios);
}

/// Jiang-Liu decomposition: equal mixing of the axis-ordered tensor rules.
inline ConvexDecomposition jiang_liu(int k, int dim) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("jiang_liu: dim must be 2 or 3");
  std::vector<double> kappa(dim, 1.0 / dim);
  return detail::classic(k, kappa, DecompositionScheme::kJiangLiu);
}

inline ConvexDecomposition jiang_liu_2d(int k) { return jiang_liu(k, 2); }
inline ConvexDecomposition jiang_liu_3d(int k) { return jiang_liu(k, 3); }

/// Optimal decomposition: face weights mu_i/2 = phi_i/(2 psi) and internal
/// nodes on the non-dominant axes carrying the remaining second moment.
inline ConvexDecomposition optimal(int k, const SpeedRatios &ratios) {
  detail::require_degree(k);
  const int dim = ratios.dim();
  const double phi_star = ratios.max();
  const double psi = ratios.psi();
  const double omega = phi_star / psi;
  ConvexDecomposition d;
  d.dim = dim;
  d.degree = k;
  d.scheme = DecompositionScheme::kOptimal;
  d.transverse_rule = gauss_rule(k + 1);
  for (int i = 0; i < dim; ++i) {
    const double mu = ratios[i] / psi;
    d.face_weights.push_back({0.5 * mu, 0.5 * mu});
  }
  auto spread = [&](int axis, double scale) {
    return scale * std::sqrt(std::max(0.0, (phi_star - ratios[axis]) / phi_star));
  };
  std::vector<InternalNode> raw;
  if (dim == 2) {
    // phi_1 >= phi_2 puts the pair on the y axis.
    const int axis = ratios[0] >= ratios[1] ? 1 : 0;
    const double h = spread(axis, 1.0 / (2.0 * std::sqrt(3.0)));
    for (double s : {-1.0, 1.0}) {
      InternalNode n;
      n.offset[axis] = s * h;
      n.weight = omega;
      raw.push_back(n);
    }
  } else {
    // First axis attaining the maximum is the dominant one.
    int dominant = 0;
    for (int i = 1; i < 3; ++i)
      if (ratios[i] > ratios[dominant]) dominant = i;
    for (int step = 1; step <= 2; ++step) {
      const int axis = (dominant + step) % 3;
      const double h = spread(axis, 1.0 / std::sqrt(6.0));
      for (double s : {-1.0, 1.0}) {
        InternalNode n;
        n.offset[axis] = s * h;
        n.weight = 0.5 * omega;
        raw.push_back(n);
      }
    }
  }
  d.internal_nodes = detail::merge_nodes(std::move(raw));
  return d;
}

inline ConvexDecomposition optimal_2d(int k, const SpeedRatios &ratios) {
  detail::require_dim(ratios, 2, "optimal_2d");
  return optimal(k, ratios);
}

inline ConvexDecomposition optimal_3d(int k, const SpeedRatios &ratios) {
  detail::require_dim(ratios, 3, "optimal_3d");
  return optimal(k, ratios);
}

/// Max defect of the decomposition over all monomials of total degree <= k,
/// measured against the exact cell mean.
inline double verify_exactness(const ConvexDecomposition &d) {
  const int dim = d.dim;
  double worst = 0.0;
  std::array<int, 3> m{0, 0, 0};
  auto mono = [&](const std::array<double, 3> &x) {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= std::pow(x[a], m[a]);
    return v;
  };
  const int top = d.degree;
  for (m[0] = 0; m[0] <= top; ++m[0]) {
    for (m[1] = 0; m[0] + m[1] <= top; ++m[1]) {
      const int zmax = dim == 3 ? top - m[0] - m[1] : 0;
      for (m[2] = 0; m[2] <= zmax; ++m[2]) {
        double exact = 1.0;
        for (int a = 0; a < dim; ++a) exact *= monomial_mean(m[a]);
        double sum = 0.0;
        for (int axis = 0; axis < dim; ++axis) {
          const auto &fw = d.face_weights[axis];
          for (auto [side, weight] : {std::pair{-0.5, fw.minus},
                                      std::pair{0.5, fw.plus}}) {
            double face = 0.0;
            detail::for_each_face_point(
                d.transverse_rule, dim, axis, side,
                [&](const std::array<double, 3> &x, double w) {
                  face += w * mono(x);
                });
            sum += weight * face;
          }
        }
        for (const auto &n : d.internal_nodes) sum += n.weight * mono(n.offset);
        worst = std::max(worst, std::fabs(sum - exact));
      }
    }
  }
  return worst;
}

/// Positivity, in-cell nodes, unit mass and exactness of a decomposition.
struct Feasibility {
  bool positive{true};
  bool nodes_in_cell{true};
  double mass_defect{0.0};
  double exactness_defect{0.0};

  bool ok(double tol = 1e-13) const {
    return positive && nodes_in_cell && mass_defect <= tol &&
           exactness_defect <= tol;
  }
};

inline Feasibility check_feasibility(const ConvexDecomposition &d) {
  Feasibility f;
  for (const auto &fw : d.face_weights)
    if (!(fw.minus > 0.0) || !(fw.plus > 0.0)) f.positive = false;
  for (const auto &n : d.internal_nodes) {
    if (!(n.weight > 0.0)) f.positive = false;
    for (int a = 0; a < d.dim; ++a)
      if (!(std::fabs(n.offset[a]) <= 0.5)) f.nodes_in_cell = false;
  }
  f.mass_defect = std::fabs(d.total_weight() - 1.0);
  f.exactness_defect = verify_exactness(d);
  return f;
}

struct CflReport {
  std::string scheme_name;
  double max_dt{std::numeric_limits<double>::infinity()};
  /// Per-axis rate a_i / (min face weight * Delta_i); 0 for inactive axes.
  std::vector<double> formula_terms;
  int internal_node_count{0};

  /// False when every axis speed is zero (no time-step restriction).
  bool bounded() const noexcept { return std::isfinite(max_dt); }
};

/// Largest BP time step dt = c0 * min_i min(w_i^-, w_i^+) Delta_i / a_i.
/// Axes with zero speed impose no constraint.
inline CflReport bp_max_dt(const ConvexDecomposition &d,
                           std::span<const double> speeds,
                           std::span<const double> spacings, double c0) {
  if (static_cast<int>(speeds.size()) != d.dim ||
      static_cast<int>(spacings.size()) != d.dim)
    throw std::invalid_argument("bp_max_dt: axis count mismatch");
  if (!(c0 > 0.0) || c0 > 1.0)
    throw std::invalid_argument("bp_max_dt: c0 must lie in (0, 1]");
  CflReport r;
  r.scheme_name = scheme_name(d.scheme);
  r.internal_node_count = static_cast<int>(d.internal_nodes.size());
  double rate = 0.0;
  for (int i = 0; i < d.dim; ++i) {
    if (speeds[i] < 0.0) throw std::invalid_argument("bp_max_dt: negative speed");
    const double ri =
        speeds[i] == 0.0 ? 0.0
                         : speeds[i] / (d.face_weights[i].min() * spacings[i]);
    r.formula_terms.push_back(ri);
    rate = std::max(rate, ri);
  }
  if (rate > 0.0) r.max_dt = c0 / rate;
  return r;
}

/// Empirical linear-stability step (sum_i a_i/Delta_i) dt <= 1/(2k+1).
/// Returns +inf when every speed is zero.
inline double linear_stability_dt(int k, std::span<const double> speeds,
                                  std::span<const double> spacings) {
  if (k < 0) throw std::invalid_argument("linear_stability_dt: k < 0");
  double rate = 0.0;
  for (std::size_t i = 0; i < speeds.size(); ++i) rate += speeds[i] / spacings[i];
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / ((2.0 * k + 1.0) * rate);
}

enum class Verdict { kDominated, kViolatesMoments, kInfeasible, kCounterexample };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kDominated: return "dominated";
    case Verdict::kViolatesMoments: return "violates_moments";
    case Verdict::kInfeasible: return "infeasible";
    case Verdict::kCounterexample: return "counterexample";
  }
  return "unknown";
}

struct Certificate {
  Verdict verdict{Verdict::kInfeasible};
  /// 3(w1+ + w1-) + (w2+ + w2-) and (w1+ + w1-) + 3(w2+ + w2-); both <= 1
  /// for any decomposition exact on x^2 and y^2.
  double moment_x{0.0};
  double moment_y{0.0};
  double candidate_dt{0.0};
  double optimal_dt{0.0};
  double dt_ratio() const { return candidate_dt / optimal_dt; }
};

/// Checks a 2D candidate against the optimal decomposition. Time steps are
/// measured with unit spacings, speeds equal to the ratios, and c0 = 1.
inline Certificate optimality_certificate(int k, const SpeedRatios &ratios,
                                          const ConvexDecomposition &candidate) {
  detail::require_degree(k);
  detail::require_dim(ratios, 2, "optimality_certificate");
  if (candidate.dim != 2)
    throw std::invalid_argument("optimality_certificate: candidate must be 2D");
  Certificate c;
  const std::array<double, 2> unit{1.0, 1.0};
  c.optimal_dt = bp_max_dt(optimal_2d(k, ratios), ratios.values(), unit, 1.0).max_dt;

  const double sx = candidate.face_weights[0].minus + candidate.face_weights[0].plus;
  const double sy = candidate.face_weights[1].minus + candidate.face_weights[1].plus;
  c.moment_x = 3.0 * sx + sy;
  c.moment_y = sx + 3.0 * sy;

  bool basic = true;
  for (const auto &fw : candidate.face_weights)
    basic = basic && fw.minus > 0.0 && fw.plus > 0.0;
  for (const auto &n : candidate.internal_nodes)
    basic = basic && n.weight > 0.0 && std::fabs(n.offset[0]) <= 0.5 &&
            std::fabs(n.offset[1]) <= 0.5;
  basic = basic && std::fabs(candidate.total_weight() - 1.0) <= 1e-12;
  if (!basic) return c;

  if (c.moment_x > 1.0 + 1e-13 || c.moment_y > 1.0 + 1e-13) {
    c.verdict = Verdict::kViolatesMoments;
    return c;
  }
  auto exact_candidate = candidate;
  exact_candidate.degree = k;
  if (verify_exactness(exact_candidate) > 1e-12) return c;

  c.candidate_dt = bp_max_dt(candidate, ratios.values(), unit, 1.0).max_dt;
  c.verdict = c.candidate_dt <= c.optimal_dt + 1e-10 ? Verdict::kDominated
                                                     : Verdict::kCounterexample;
  return c;
}

struct SearchResult {
  std::optional<double> best_dt;  // empty when nothing feasible was sampled
  int trials{0};
  int feasible{0};
  int counterexamples{0};
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// One random symmetric candidate: symmetric face weights, and internal nodes
/// as axis pairs (+-a, 0), (0, +-b) plus an optional center node, solved to
/// match the second moments left over by the faces.
inline std::optional<ConvexDecomposition> sample_candidate(int k,
                                                           std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int mode = static_cast<int>(rng() % 4);
  const double u1 = uni(rng), u2 = uni(rng), u3 = uni(rng), u4 = uni(rng);
  double w1 = 0.0, w2 = 0.0;
  switch (mode) {
    case 0: w1 = u1 / 6.0; w2 = u2 / 2.0; break;           // interior
    case 1: w2 = u2 / 8.0; w1 = 1.0 / 6.0 - w2 / 3.0; break;  // x moment tight
    case 2: w1 = u1 / 8.0; w2 = 1.0 / 6.0 - w1 / 3.0; break;  // y moment tight
    default: w1 = w2 = 1.0 / 8.0; break;                    // both tight
  }
  if (!(w1 > 0.0) || !(w2 > 0.0)) return std::nullopt;
  const double mass = 1.0 - 2.0 * w1 - 2.0 * w2;
  double sx = 1.0 / 12.0 - w1 / 2.0 - w2 / 6.0;
  double sy = 1.0 / 12.0 - w1 / 6.0 - w2 / 2.0;
  if (!(mass > 0.0) || sx < -1e-15 || sy < -1e-15) return std::nullopt;
  if (std::fabs(sx) <= 1e-15) sx = 0.0;
  if (std::fabs(sy) <= 1e-15) sy = 0.0;

  // Split the interior mass among the x pair, the y pair and the center.
  double mx = 0.0, my = 0.0;
  const bool center = u4 < 0.5;
  const double pairs = center ? mass * (0.05 + 0.95 * u3) : mass;
  if (sx > 0.0 && sy > 0.0) {
    const double f = 0.05 + 0.9 * uni(rng);
    mx = f * pairs;
    my = (1.0 - f) * pairs;
  } else if (sx > 0.0) {
    mx = pairs;
  } else if (sy > 0.0) {
    my = pairs;
  }
  const double mc = mass - mx - my;

  ConvexDecomposition d;
  d.dim = 2;
  d.degree = k;
  d.scheme = DecompositionScheme::kCustom;
  d.transverse_rule = gauss_rule(k + 1);
  d.face_weights = {{w1, w1}, {w2, w2}};
  if (mx > 0.0) {
    const double a = std::sqrt(sx / mx);
    for (double s : {-1.0, 1.0}) d.internal_nodes.push_back({{s * a, 0.0, 0.0}, 0.5 * mx});
  }
  if (my > 0.0) {
    const double b = std::sqrt(sy / my);
    for (double s : {-1.0, 1.0}) d.internal_nodes.push_back({{0.0, s * b, 0.0}, 0.5 * my});
  }
  if (mc > 1e-15) d.internal_nodes.push_back({{0.0, 0.0, 0.0}, mc});
  d.internal_nodes = merge_nodes(std::move(d.internal_nodes));
  return d;
}

}  // namespace detail

/// Random search over a family of symmetric feasible candidates; returns the
/// best BP time step found (unit spacings, c0 = 1). Trial t draws from its
/// own generator seeded by splitmix64(seed, t), so results do not depend on
/// how trials are scheduled.
inline SearchResult random_feasible_search(int k, const SpeedRatios &ratios,
                                           int trials, std::uint64_t seed) {
  if (trials < 1)
    throw std::invalid_argument("random_feasible_search: trials must be >= 1");
  detail::require_degree(k);
  detail::require_dim(ratios, 2, "random_feasible_search");
  SearchResult result;
  result.trials = trials;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(
                                                      static_cast<std::uint64_t>(t))));
    auto cand = detail::sample_candidate(k, rng);
    if (!cand) continue;
    const auto cert = optimality_certificate(k, ratios, *cand);
    if (cert.verdict == Verdict::kCounterexample) ++result.counterexamples;
    if (cert.verdict != Verdict::kDominated &&
        cert.verdict != Verdict::kCounterexample)
      continue;
    ++result.feasible;
    if (!result.best_dt || cert.candidate_dt > *result.best_dt)
      result.best_dt = cert.candidate_dt;
  }
  return result;
}

}  // namespace bpdg

#endif  // BPDG_DECOMPOSITION_HPP_
