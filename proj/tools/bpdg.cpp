// Command-line driver: run, converge, decomp-report, compare.
//
// Exit codes: 0 success, 2 config error, 3 admissibility failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bpdg/errors.hpp"
#include "bpdg/harness/config.hpp"
#include "bpdg/harness/run.hpp"
#include "bpdg/harness/studies.hpp"

namespace {

using namespace bpdg;
using namespace bpdg::harness;

constexpr int kConfigError = 2;
constexpr int kAdmissibility = 3;

void print_run(const RunReport &r) {
  const auto &c = r.config;
  std::printf("%s (%s) k=%d %s dt=%s node_set=%s bp=%s %dx%d\n", c.problem.c_str(),
              c.model.c_str(), c.k, ssp_name(c.scheme).c_str(),
              policy_name(c.step.policy).c_str(), node_set_name(c.node_set).c_str(),
              c.bp_limiter ? "on" : "off", c.nx, c.ny);
  for (const auto &s : r.snapshots) {
    std::printf("  t=%-10.6g steps=%-7ld avg in [%.17g, %.17g]", s.time, s.steps, s.min_avg,
                s.max_avg);
    if (!std::isnan(s.min_pressure)) std::printf(" min p=%.6g", s.min_pressure);
    if (s.errors)
      std::printf(" L1=%.6e L2=%.6e Linf=%.6e", s.errors->l1, s.errors->l2, s.errors->linf);
    std::printf("\n");
  }
  std::printf("  limited cells=%ld min theta=%.6g troubled cells=%ld\n",
              r.limiter.cells_limited, r.limiter.min_theta, r.limiter.troubled_cells);
  std::printf("  bp_violation=%s wall=%.3f s\n", r.bp_violation ? "yes" : "no", r.wall_seconds);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Bound-preserving DG solver driver"};
  app.require_subcommand(1);

  std::string run_cfg, run_out;
  auto *run_cmd = app.add_subcommand("run", "Run one configured problem");
  run_cmd->add_option("config", run_cfg, "config file")->required();
  run_cmd->add_option("--output-dir", run_out, "override output.dir");

  std::string conv_cfg, conv_out, conv_grids = "20,40,80,160";
  auto *conv_cmd = app.add_subcommand("converge", "Grid-refinement study");
  conv_cmd->add_option("config", conv_cfg, "config file")->required();
  conv_cmd->add_option("--grids", conv_grids, "comma-separated N values");
  conv_cmd->add_option("--output-dir", conv_out, "override output.dir");

  int dr_k = 2;
  std::string dr_phi = "1,1,1", dr_csv;
  double dr_c0 = 1.0;
  auto *dr_cmd = app.add_subcommand("decomp-report", "CFL and node tables of every decomposition");
  dr_cmd->add_option("--k", dr_k, "polynomial degree (2 or 3)");
  dr_cmd->add_option("--phi", dr_phi, "speed ratios a_i/dx_i; two or three values");
  dr_cmd->add_option("--c0", dr_c0, "CFL fraction in (0, 1]");
  dr_cmd->add_option("--csv", dr_csv, "also write the table here");

  std::string cmp_a, cmp_b;
  auto *cmp_cmd = app.add_subcommand("compare", "Paired run: step counts and wall times");
  cmp_cmd->add_option("configA", cmp_a, "first config (e.g. optimal)")->required();
  cmp_cmd->add_option("configB", cmp_b, "second config (e.g. classic)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*run_cmd) {
      auto cfg = load_config(run_cfg);
      if (!run_out.empty()) cfg.output_dir = run_out;
      print_run(run(cfg));
    } else if (*conv_cmd) {
      auto cfg = load_config(conv_cfg);
      if (!conv_out.empty()) cfg.output_dir = conv_out;
      std::vector<int> grids;
      for (double g : parse_number_list(conv_grids)) {
        if (g != std::floor(g) || g < 1) throw ConfigError("--grids: positive integers only");
        grids.push_back(static_cast<int>(g));
      }
      const auto rows = convergence_study(cfg, grids);
      std::printf("%-6s %-13s %-7s %-13s %-7s %-13s %-7s %s\n", "N", "L1", "order", "L2",
                  "order", "Linf", "order", "steps");
      for (const auto &r : rows)
        std::printf("%-6d %-13.6e %-7.3f %-13.6e %-7.3f %-13.6e %-7.3f %ld\n", r.n,
                    r.errors.l1, r.order_l1, r.errors.l2, r.order_l2, r.errors.linf,
                    r.order_linf, r.steps);
    } else if (*dr_cmd) {
      auto phi = parse_number_list(dr_phi);
      if (phi.size() == 2) phi.push_back(phi[1]);
      if (phi.size() != 3) throw ConfigError("--phi: give two or three ratios");
      if (dr_k != 2 && dr_k != 3) throw ConfigError("--k must be 2 or 3");
      if (!(dr_c0 > 0.0) || dr_c0 > 1.0) throw ConfigError("--c0 must lie in (0, 1]");
      for (double p : phi)
        if (!(p > 0.0)) throw ConfigError("--phi: ratios must be positive");
      const auto rows = decomp_report(dr_k, phi, dr_c0);
      print_decomp_report(std::cout, dr_k, phi, dr_c0, rows);
      if (!dr_csv.empty()) write_decomp_csv(dr_csv, rows);
    } else if (*cmp_cmd) {
      const auto e = efficiency_compare(load_config(cmp_a), load_config(cmp_b));
      print_efficiency(std::cout, e);
    }
  } catch (const ConfigError &e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const AdmissibilityError &e) {
    std::fprintf(stderr, "admissibility failure: %s\n", e.what());
    return kAdmissibility;
  } catch (const StepLimitReached &e) {
    std::fprintf(stderr, "stopped: %s\n", e.what());
    return 1;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
