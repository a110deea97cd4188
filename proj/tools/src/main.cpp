#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "suites.hpp"

namespace {

int jobs_from_env() {
  const char* env = std::getenv("DISPERSIVE_LAB_JOBS");
  if (!env || !*env) return 1;
  try {
    const int j = std::stoi(env);
    return j > 0 ? j : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dispersive-lab: spectral propagators, subordination and decay scans"};
  app.require_subcommand(1);
  std::string config_path, out_dir, golden;
  int jobs = jobs_from_env();
  std::string chosen;
  for (const auto& name : dlab::cli::subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " suite");
    sub->add_option("--config", config_path, "scenario TOML file")->required()->check(CLI::ExistingFile);
    sub->add_option("--jobs", jobs, "worker threads (default $DISPERSIVE_LAB_JOBS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory (default output.dir of the config)");
    sub->add_option("--golden", golden, "manifest.json of a previous run to compare against")
        ->check(CLI::ExistingFile);
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  dlab::cli::ScenarioConfig cfg;
  try {
    cfg = dlab::cli::load_config(config_path);
  } catch (const dlab::cli::ConfigError& e) {
    for (const auto& msg : e.errors()) std::cerr << "config error: " << msg << "\n";
    return 2;
  }

  dlab::cli::RunOptions opts;
  opts.jobs = jobs;
  opts.out_dir = out_dir.empty() ? cfg.output_dir : out_dir;
  if (!golden.empty()) opts.golden = golden;

  dlab::cli::RunReport report;
  try {
    report = dlab::cli::run(chosen, cfg, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  for (const auto& c : report.checks) {
    std::cout << "[" << dlab::cli::to_string(c.status) << "] " << c.name << ": " << c.message << "\n";
  }
  std::cout << "outputs in " << opts.out_dir.string() << "\n";
  return report.any_failed() ? 1 : 0;
}
