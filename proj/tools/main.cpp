#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "confdirac_cli/commands.hpp"

using namespace confdirac::cli;

int main(int argc, char** argv) {
  CLI::App app{"Conformal Dirac spectra, test-spinor sweeps and mass endomorphisms on flat tori"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  RunConfig cfg;
  std::string eps_text, pole_text, config_file;
  app.add_option("--n", cfg.n, "dimension")->capture_default_str();
  app.add_option("--delta", cfg.delta, "spin structure, e.g. 0.5,0 (mass: 'all')")->capture_default_str();
  app.add_option("--modes,-K", cfg.modes, "Fourier mode cutoff K")->capture_default_str();
  app.add_option("--grid,-m", cfg.grid, "grid resolution m")->capture_default_str();
  app.add_option("--eps", eps_text, "comma-separated epsilon list");
  app.add_option("--family", cfg.family, "simple | three-zone")->capture_default_str();
  app.add_option("--branch", cfg.branch, "plus | minus | both")->capture_default_str();
  app.add_option("--cutoff", cfg.cutoff, "cos2 | smoothstep")->capture_default_str();
  app.add_option("--convention", cfg.convention, "continuous | as-displayed")->capture_default_str();
  app.add_option("--route", cfg.route, "analytic | spectral")->capture_default_str();
  app.add_option("--points-per-eps", cfg.points_per_epsilon, "grid points per unit 1/eps")->capture_default_str();
  app.add_option("--budget", cfg.budget, "objective evaluations for minimize")->capture_default_str();
  app.add_option("--max-frequency", cfg.max_frequency, "highest search-space frequency")->capture_default_str();
  app.add_option("--bound", cfg.bound, "coefficient bound of the search space")->capture_default_str();
  app.add_option("--pole", pole_text, "pole position (default: cell center)");
  app.add_option("--eigen-tol", cfg.tol.eigen)->capture_default_str();
  app.add_option("--spectrum-tol", cfg.tol.spectrum)->capture_default_str();
  app.add_option("--quadrature-tol", cfg.tol.quadrature)->capture_default_str();
  app.add_option("--mass-tol", cfg.tol.mass)->capture_default_str();
  app.add_option("--hermiticity-tol", cfg.tol.hermiticity)->capture_default_str();
  app.add_option("--extrapolation-tol", cfg.tol.extrapolation)->capture_default_str();
  app.add_option("--spread-tol", cfg.tol.spread)->capture_default_str();
  app.add_option("--limit-tol", cfg.tol.limit)->capture_default_str();
  app.add_option("--exponent-threshold", cfg.tol.exponent)->capture_default_str();
  app.add_option("--inequality-tol", cfg.tol.inequality)->capture_default_str();
  app.add_option("--out,-o", cfg.output, "output prefix for <run>.record.txt and <run>.table.csv")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for randomized directions")->capture_default_str();
  app.add_option("--config", config_file, "JSON file; its keys override the flags");

  for (const char* name : {"spectrum", "sweep", "mass", "minimize", "selfcheck"})
    app.add_subcommand(name)->callback([&cfg, name] { cfg.command = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (!eps_text.empty()) cfg.epsilons = parse_list(eps_text);
    else if (app.count("--eps")) cfg.epsilons.clear();
    if (!pole_text.empty()) cfg.pole = parse_list(pole_text);
    if (!config_file.empty()) apply_json_file(cfg, config_file);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }

  const RunOutcome outcome = run(cfg);
  const ResultRecord& rec = outcome.record;
  std::cout << format_table(rec.table);
  for (const auto& [k, v] : rec.scalars) std::printf("%-48s %.17g\n", k.c_str(), v);
  for (const auto& [k, v] : rec.text) std::printf("%-48s %s\n", k.c_str(), v.c_str());
  for (const auto& c : rec.checks)
    std::printf("%-4s %-44s defect=%.3e tol=%.3e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.defect, c.tolerance);
  try {
    rec.write(cfg.output);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitNumerical;
  }
  std::printf("exit %d, record %s.record.txt\n", outcome.exit_code, cfg.output.c_str());
  return outcome.exit_code;
}
