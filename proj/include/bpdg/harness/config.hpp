#ifndef BPDG_HARNESS_CONFIG_HPP_
#define BPDG_HARNESS_CONFIG_HPP_

// Run configuration: a line-oriented `key = value` file with `#` comments.
// The `problem` key selects a preset; every other key overrides it.

#include <array>
#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bpdg/errors.hpp"
#include "bpdg/mesh.hpp"
#include "bpdg/solver.hpp"
#include "bpdg/time.hpp"

namespace bpdg::harness {

enum class SideKind { kPeriodic, kOutflow, kInflow };

struct RunConfig {
  std::string problem{"advection_sine"};
  std::string model{"advection2d"};
  int k{2};
  SspScheme scheme{SspScheme::kSsprk3};
  StepControl step{};
  bool bp_limiter{true};
  double tvb_m{0.0};  // 0 disables the TVB limiter
  NodeSetChoice node_set{NodeSetChoice::kOptimal};
  double t_end{2.0};
  std::vector<double> output_times;
  std::string output_dir;
  std::uint64_t seed{1};
  std::array<double, 4> domain{-1.0, 1.0, -1.0, 1.0};
  int nx{100}, ny{100};
  std::array<SideKind, 4> bc{SideKind::kPeriodic, SideKind::kPeriodic, SideKind::kPeriodic,
                             SideKind::kPeriodic};
  double cx{1.0}, cy{1.0};
  double gamma{5.0 / 3.0};
  std::array<double, 4> jet_state{5.0, 30.0, 0.0, 0.4127};
  std::array<double, 4> ambient{5.0, 0.0, 0.0, 0.4127};
  double jet_y_lo{-0.05}, jet_y_hi{0.05};
  // upper-left, upper-right, lower-left, lower-right
  std::array<double, 4> quadrants{-0.2, -1.0, 0.5, 0.8};
  long max_steps{0};  // 0: no limit
};

inline const std::vector<std::string> &problem_names() {
  static const std::vector<std::string> names{"advection_sine", "burgers_riemann",
                                              "mach80_jet", "mach2000_jet"};
  return names;
}

/// Desk-scale defaults for each shipped problem.
inline RunConfig preset(const std::string &problem) {
  RunConfig c;
  c.problem = problem;
  if (problem == "advection_sine") return c;
  if (problem == "burgers_riemann") {
    c.model = "burgers2d";
    c.domain = {0.0, 1.0, 0.0, 1.0};
    c.nx = c.ny = 64;
    c.bc = {SideKind::kOutflow, SideKind::kOutflow, SideKind::kOutflow, SideKind::kOutflow};
    c.t_end = 0.5;
    return c;
  }
  if (problem == "mach80_jet" || problem == "mach2000_jet") {
    c.model = "euler2d";
    c.bc = {SideKind::kInflow, SideKind::kOutflow, SideKind::kOutflow, SideKind::kOutflow};
    c.nx = 120;
    c.ny = 60;
    c.tvb_m = 1.0;
    if (problem == "mach80_jet") {
      c.domain = {0.0, 2.0, -0.5, 0.5};
      c.t_end = 0.07;
    } else {
      c.domain = {0.0, 1.0, -0.25, 0.25};
      c.jet_state = {5.0, 800.0, 0.0, 0.4127};
      c.t_end = 0.001;
    }
    return c;
  }
  throw ConfigError("unknown problem '" + problem + "'");
}

inline std::string model_of(const std::string &problem) { return preset(problem).model; }

namespace detail {

inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double to_double(const std::string &v, int line) {
  errno = 0;
  char *end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
    throw ConfigError("expected a number, got '" + v + "'", line);
  return x;
}

inline long to_long(const std::string &v, int line) {
  errno = 0;
  char *end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    throw ConfigError("expected an integer, got '" + v + "'", line);
  return x;
}

inline std::vector<double> to_list(const std::string &v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), line));
  return out;
}

template <std::size_t N>
std::array<double, N> to_array(const std::string &v, int line) {
  const auto xs = to_list(v, line);
  if (xs.size() != N)
    throw ConfigError("expected " + std::to_string(N) + " comma-separated numbers", line);
  std::array<double, N> a{};
  std::copy(xs.begin(), xs.end(), a.begin());
  return a;
}

inline bool to_switch(const std::string &v, int line) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("expected on|off, got '" + v + "'", line);
}

inline SideKind to_side(const std::string &v, int line) {
  if (v == "periodic") return SideKind::kPeriodic;
  if (v == "outflow") return SideKind::kOutflow;
  if (v == "inflow") return SideKind::kInflow;
  throw ConfigError("expected periodic|outflow|inflow, got '" + v + "'", line);
}

struct Entry {
  std::string value;
  int line;
};

}  // namespace detail

/// Comma-separated numbers, e.g. "20, 40, 80".
inline std::vector<double> parse_number_list(const std::string &s) {
  return detail::to_list(s, 0);
}

inline RunConfig parse_config(const std::string &text) {
  using namespace detail;
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
    if (!entries.emplace(key, Entry{value, line}).second)
      throw ConfigError("duplicate key '" + key + "'", line);
  }

  RunConfig c;
  if (auto it = entries.find("problem"); it != entries.end()) {
    try {
      c = preset(it->second.value);
    } catch (const ConfigError &e) {
      throw ConfigError(e.what(), it->second.line);
    }
    entries.erase(it);
  }

  for (const auto &[key, e] : entries) {
    const std::string &v = e.value;
    const int ln = e.line;
    if (key == "model") {
      if (v != c.model)
        throw ConfigError("model '" + v + "' does not match problem '" + c.problem +
                              "' (" + c.model + ")",
                          ln);
    } else if (key == "k") {
      c.k = static_cast<int>(to_long(v, ln));
      if (c.k != 2 && c.k != 3) throw ConfigError("k must be 2 or 3", ln);
    } else if (key == "scheme") {
      if (v == "ssprk3") c.scheme = SspScheme::kSsprk3;
      else if (v == "ssprk4") c.scheme = SspScheme::kSsprk4;
      else throw ConfigError("scheme must be ssprk3|ssprk4", ln);
    } else if (key == "dt.policy") {
      if (v == "optimal") c.step.policy = DtPolicy::kOptimalBP;
      else if (v == "classic") c.step.policy = DtPolicy::kClassicBP;
      else if (v == "jiangliu") c.step.policy = DtPolicy::kJiangLiuBP;
      else if (v == "linear") c.step.policy = DtPolicy::kLinearStability;
      else throw ConfigError("dt.policy must be optimal|classic|jiangliu|linear", ln);
    } else if (key == "dt.c0") {
      c.step.c0 = to_double(v, ln);
      if (!(c.step.c0 > 0.0) || c.step.c0 > 1.0) throw ConfigError("dt.c0 must lie in (0, 1]", ln);
    } else if (key == "dt.safety") {
      c.step.safety = to_double(v, ln);
      if (!(c.step.safety > 0.0)) throw ConfigError("dt.safety must be positive", ln);
    } else if (key == "dt.fallback") {
      c.step.fallback_dt = to_double(v, ln);
      if (!(c.step.fallback_dt > 0.0)) throw ConfigError("dt.fallback must be positive", ln);
    } else if (key == "limiter.bp") {
      c.bp_limiter = to_switch(v, ln);
    } else if (key == "limiter.tvb_M") {
      c.tvb_m = v == "off" ? 0.0 : to_double(v, ln);
      if (c.tvb_m < 0.0) throw ConfigError("limiter.tvb_M must be >= 0 or off", ln);
    } else if (key == "limiter.node_set") {
      if (v == "optimal") c.node_set = NodeSetChoice::kOptimal;
      else if (v == "classic") c.node_set = NodeSetChoice::kClassic;
      else if (v == "jiangliu") c.node_set = NodeSetChoice::kJiangLiu;
      else throw ConfigError("limiter.node_set must be optimal|classic|jiangliu", ln);
    } else if (key == "t_end") {
      c.t_end = to_double(v, ln);
      if (!(c.t_end > 0.0)) throw ConfigError("t_end must be positive", ln);
    } else if (key == "output.times") {
      c.output_times = v == "none" ? std::vector<double>{} : to_list(v, ln);
    } else if (key == "output.dir") {
      c.output_dir = v;
    } else if (key == "seed") {
      const long s = to_long(v, ln);
      if (s < 0) throw ConfigError("seed must be >= 0", ln);
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "domain.x") {
      const auto a = to_array<2>(v, ln);
      c.domain[0] = a[0];
      c.domain[1] = a[1];
    } else if (key == "domain.y") {
      const auto a = to_array<2>(v, ln);
      c.domain[2] = a[0];
      c.domain[3] = a[1];
    } else if (key == "mesh.nx" || key == "mesh.ny") {
      const long n = to_long(v, ln);
      if (n < 1 || n > 100000) throw ConfigError(key + " must lie in [1, 100000]", ln);
      (key == "mesh.nx" ? c.nx : c.ny) = static_cast<int>(n);
    } else if (key == "max_steps") {
      c.max_steps = to_long(v, ln);
      if (c.max_steps < 0) throw ConfigError("max_steps must be >= 0", ln);
    } else if (key == "bc.left" || key == "bc.right" || key == "bc.bottom" || key == "bc.top") {
      const int side = key == "bc.left" ? 0 : key == "bc.right" ? 1 : key == "bc.bottom" ? 2 : 3;
      c.bc[side] = to_side(v, ln);
      if (c.bc[side] == SideKind::kInflow && c.model != "euler2d")
        throw ConfigError("inflow boundaries need the euler2d model", ln);
    } else if (key == "advection.cx") {
      c.cx = to_double(v, ln);
    } else if (key == "advection.cy") {
      c.cy = to_double(v, ln);
    } else if (key == "euler.gamma") {
      c.gamma = to_double(v, ln);
      if (!(c.gamma > 1.0)) throw ConfigError("euler.gamma must exceed 1", ln);
    } else if (key == "jet.state") {
      c.jet_state = to_array<4>(v, ln);
    } else if (key == "jet.ambient") {
      c.ambient = to_array<4>(v, ln);
    } else if (key == "jet.y") {
      const auto a = to_array<2>(v, ln);
      if (!(a[0] <= a[1])) throw ConfigError("jet.y needs lo <= hi", ln);
      c.jet_y_lo = a[0];
      c.jet_y_hi = a[1];
    } else if (key == "burgers.quadrants") {
      c.quadrants = to_array<4>(v, ln);
    } else {
      throw ConfigError("unknown key '" + key + "'", ln);
    }
  }

  if (!(c.domain[1] > c.domain[0]) || !(c.domain[3] > c.domain[2]))
    throw ConfigError("domain must have positive extent");
  if ((c.bc[0] == SideKind::kPeriodic) != (c.bc[1] == SideKind::kPeriodic) ||
      (c.bc[2] == SideKind::kPeriodic) != (c.bc[3] == SideKind::kPeriodic))
    throw ConfigError("periodic sides must come in pairs");
  for (double t : c.output_times)
    if (!(t > 0.0) || t > c.t_end) throw ConfigError("output.times must lie in (0, t_end]");
  return c;
}

inline RunConfig load_config(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace bpdg::harness

#endif  // BPDG_HARNESS_CONFIG_HPP_
