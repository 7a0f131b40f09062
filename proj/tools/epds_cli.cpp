#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "epds/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"DC power distribution network simulator and verifier"};
  app.require_subcommand(1);

  std::string config;
  std::string controller;
  std::string out_dir;

  auto* sim = app.add_subcommand("simulate", "integrate one controller over the configured scenario");
  sim->add_option("config", config, "run configuration (YAML)")->required();
  sim->add_option("--controller", controller, "c1, c2 or c3")->check(CLI::IsMember({"c1", "c2", "c3"}));
  sim->add_option("--out", out_dir, "output directory (overrides output.dir)");

  auto* verify = app.add_subcommand("verify", "run the analytic checks and print a pass/fail table");
  verify->add_option("config", config, "run configuration (YAML)")->required();

  auto* compare = app.add_subcommand("compare", "run c1, c2 and c3 on the same scenario");
  compare->add_option("config", config, "run configuration (YAML)")->required();
  compare->add_option("--out", out_dir, "output directory (overrides output.dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : epds::kExitConfigError;
  }

  auto opt_out = out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir);
  if (*sim) {
    std::optional<epds::ControllerKind> kind;
    if (!controller.empty()) kind = epds::controller_from_string(controller);
    return epds::cmd_simulate(config, kind, opt_out, std::cout, std::cerr);
  }
  if (*verify) return epds::cmd_verify(config, std::cout, std::cerr);
  return epds::cmd_compare(config, opt_out, std::cout, std::cerr);
}
