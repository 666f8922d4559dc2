#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nlheat/error.hpp"
#include "nlheat/presets.hpp"
#include "nlheat/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal heat equation solver and estimate auditor"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Solve a scenario and audit the configured estimates");
  run->add_option("--config", config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  auto* threads_opt = run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* list_checks = app.add_subcommand("list-checks", "List audit names and the check ids they emit");
  auto* list_presets = app.add_subcommand("list-presets", "List data presets and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list_checks->parsed()) {
    for (const auto& [name, ids] : nlheat::scenario_checks()) {
      std::cout << name << ':';
      for (const auto& id : ids) std::cout << ' ' << id;
      std::cout << '\n';
    }
    return 0;
  }
  if (list_presets->parsed()) {
    for (const auto& p : nlheat::preset_catalog()) {
      std::cout << p.name << " -- " << p.description;
      if (!p.params.empty()) {
        std::cout << " [";
        for (std::size_t i = 0; i < p.params.size(); ++i) std::cout << (i ? ", " : "") << p.params[i];
        std::cout << ']';
      }
      std::cout << '\n';
    }
    return 0;
  }

  nlheat::RunOptions opt;
  opt.config = config;
  opt.out_dir = out;
  if (*seed_opt) opt.seed = seed;
  if (*threads_opt) opt.threads = threads;
  nlheat::RunOutcome outcome;
  try {
    outcome = nlheat::run_scenario(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  (outcome.exit_code >= 2 ? std::cerr : std::cout) << outcome.message << '\n';
  return outcome.exit_code;
}
