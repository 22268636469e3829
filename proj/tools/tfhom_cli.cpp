// Command-line front end: tfhom <subcommand> [--config PATH] [--set key=value ...] [--out DIR]

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tfhom/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Time-fractional Hamilton-Jacobi homogenization lab"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"caputo-check", "Check the J + K splitting and power-rule oracles of the Caputo quadrature"},
      {"cell", "Tabulate the effective Hamiltonian to hbar.csv"},
      {"solve", "Solve one oscillatory (or effective) problem and export snapshots.csv"},
      {"homogenize", "Run the eps sweep and write rate_report.json, errors.csv, rate_plot.svg"},
      {"lemmas", "Check sup-convolution and discounted-corrector estimates"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Flat JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--set", sets, "Override one key, e.g. --set alpha=0.3 (repeatable)");
    sub->add_option("--out", out_dir, "Output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : tfhom::cli::kExitOperational;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  tfhom::cli::RunConfig cfg;
  try {
    cfg = tfhom::cli::parse_config(config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path),
                                   sets, subcommand,
                                   out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir));
  } catch (const tfhom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tfhom::cli::kExitOperational;
  }
  return tfhom::cli::run(cfg);
}
