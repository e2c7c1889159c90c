#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sllbar/app/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulation lab for the stochastic LLBar equation with Marcus jump noise"};
  app.set_version_flag("--version", std::string(sllbar::app::kVersion));
  app.require_subcommand(1);

  std::string config;
  std::string out;
  unsigned long long seed = 0;
  unsigned threads = 0;
  app.add_option("--config", config, "key = value experiment file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides run.seed)");
  auto* out_opt = app.add_option("--out", out, "output directory (overrides run.output)");
  auto* threads_opt =
      app.add_option("--threads", threads, "parallel ensemble width, 0 = auto (overrides run.threads)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "integrate the SDE along a sampled or replayed jump path"},
      {"skeleton", "integrate the skeleton equation for a control (default theta = 1)"},
      {"condition1", "convergence of skeleton solutions along a control sequence"},
      {"condition2", "controlled ensembles against the skeleton as epsilon decreases"},
      {"energy-audit", "energy records and dissipation verdict for one run"},
      {"flow-check", "closed-form Marcus flow against the RK4 flow"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sllbar::app::kExitConfig;
  }

  std::vector<std::pair<std::string, std::string>> overrides;
  if (*seed_opt) overrides.emplace_back("run.seed", std::to_string(seed));
  if (*out_opt) overrides.emplace_back("run.output", out);
  if (*threads_opt) overrides.emplace_back("run.threads", std::to_string(threads));

  const std::string command = app.get_subcommands().front()->get_name();
  std::string message;
  const int code = sllbar::app::execute(command, config, overrides, &message);
  if (code == 0) {
    std::cout << message << "\n";
  } else {
    std::cerr << message << "\n";
  }
  return code;
}
