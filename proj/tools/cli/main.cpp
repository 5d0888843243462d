#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  using namespace iprox;
  using namespace iprox::cli;

  CLI::App app{"Inexact proximal operators: runs, bound tables and verification"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "Directory for output files")->capture_default_str();

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one configured algorithm and write trace + manifest");
  run->add_option("--config", config_path, "key=value config file")->required();
  std::optional<std::uint64_t> run_seed;
  run->add_option("--seed", run_seed, "Override approx.seed");
  int run_jobs = 1;
  run->add_option("--jobs", run_jobs, "Worker threads for Monte-Carlo sampling")
      ->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  std::string filter = "all";
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string report;
  verify->add_option("--filter", filter, "'all', an id prefix or substring")->capture_default_str();
  verify->add_option("--seed", seed, "Base seed")->capture_default_str();
  verify->add_option("--jobs", jobs, "Checks run in parallel")->check(CLI::PositiveNumber);
  verify->add_option("--report", report, "Report path (default <out-dir>/verify.json)");

  auto* bounds = app.add_subcommand("bounds", "Print sigma, L and gamma for one kind");
  std::string kind_name;
  double eps = 0.1;
  BoundConstants bc;
  bounds->add_option("kind", kind_name, "a..f")->required();
  bounds->add_option("eps", eps, "Error level")->required();
  bounds->add_option("--L-psi", bc.L_psi);
  bounds->add_option("--rho", bc.rho);
  bounds->add_option("--lambda", bc.lambda);
  bounds->add_option("--L-eps", bc.L_eps);
  bounds->add_option("--N", bc.N);
  bounds->add_option("--tau", bc.tau);

  auto* surface = app.add_subcommand("surface", "Contraction factors over (L_g, mu/L_f)");
  SurfaceSpec spec;
  surface->add_option("--lg-min", spec.lg_min)->capture_default_str();
  surface->add_option("--lg-max", spec.lg_max)->capture_default_str();
  surface->add_option("--lg-steps", spec.lg_steps)->capture_default_str();
  surface->add_option("--ratio-min", spec.ratio_min)->capture_default_str();
  surface->add_option("--ratio-max", spec.ratio_max)->capture_default_str();
  surface->add_option("--ratio-steps", spec.ratio_steps)->capture_default_str();

  auto* fixedpoint = app.add_subcommand("fixedpoint", "Analytic vs numerical fixed points");
  std::string example;
  double fp_eps = 0.1, fp_gamma = 0.5;
  fixedpoint->add_option("example", example, "sq_l2:a, sq_l2:b, sq_l2:d, l2:a, l2:b or l2:d")
      ->required();
  fixedpoint->add_option("--eps", fp_eps)->capture_default_str();
  fixedpoint->add_option("--gamma", fp_gamma)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      RunConfig cfg = load_config(config_path);
      if (run_seed) cfg.approx.seed = *run_seed;
      return cmd_run(cfg, out_dir, std::cout, run_jobs);
    }
    if (*verify) {
      if (report.empty()) report = (std::filesystem::path(out_dir) / "verify.json").string();
      return cmd_verify(filter, seed, jobs, report, std::cout);
    }
    if (*bounds) return cmd_bounds(approx_kind_from_string(kind_name), eps, bc, std::cout);
    if (*surface) {
      spec.validate();
      return cmd_surface(spec, out_dir, std::cout);
    }
    if (*fixedpoint) return cmd_fixedpoint(example, fp_eps, fp_gamma, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
