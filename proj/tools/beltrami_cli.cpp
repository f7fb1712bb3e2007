// Command-line entry point for verification runs.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "beltrami/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Verification runs for curl eigenvalue optimization on S^3, RP^3, T^3 and thin tori"};
  std::string command, config_path, out, format, manifold, target;
  std::uint64_t seed = 0;
  int dmax = 0;
  double tol_exact = 0.0, tol_float = 0.0;
  bool print_config = false;

  std::string commands;
  for (const auto& c : beltrami::report_commands()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("--command", command, "One of: " + commands);
  app.add_option("target", target, "Scan target for optimality-scan (s3, rp3, t3)");
  app.add_option("--config", config_path, "JSON run configuration; flags override its values");
  app.add_option("--out", out, "Report path (default: stdout)");
  app.add_option("--format", format, "json or csv");
  app.add_option("--manifold", manifold, "Scan target for optimality-scan (s3, rp3, t3)");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--dmax", dmax, "Truncation degree");
  app.add_option("--tol-exact", tol_exact, "Tolerance for closed-form checks");
  app.add_option("--tol-float", tol_float, "Tolerance for floating checks");
  app.add_flag("--print-config", print_config, "Print the effective configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  beltrami::RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw beltrami::ConfigError("cannot read config file " + config_path);
      std::stringstream ss;
      ss << f.rdbuf();
      cfg = beltrami::RunConfig::from_json(ss.str());
    }
    if (app.count("--command")) cfg.command = command;
    if (app.count("--out")) cfg.out = out;
    if (app.count("--format")) cfg.format = format;
    if (app.count("--manifold")) cfg.manifold = manifold;
    if (app.count("target")) cfg.manifold = target;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--dmax")) cfg.dmax = dmax;
    if (app.count("--tol-exact")) cfg.tol_exact = tol_exact;
    if (app.count("--tol-float")) cfg.tol_float = tol_float;
    cfg.validate();
  } catch (const beltrami::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }
  if (print_config) {
    std::cout << cfg.to_json() << "\n";
    return 0;
  }
  try {
    return beltrami::run(cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
