// omegahat: batch driver for the semi-POVM experiments.
//
// Exit status: 0 success, 1 validator or selfcheck violation, 2 bad input.
// Errors are written to stderr as one JSON object.

#include "commands.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using omegahat::cli::ExperimentConfig;
using nlohmann::json;

int fail(int status, const std::string& command, const std::string& message, const json& details = nullptr) {
  json j = {{"error", message}, {"command", command}, {"status", status}};
  if (!details.is_null()) j["details"] = details;
  std::cerr << j.dump() << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact semi-POVM experiments: Omega, the universal semi-POVM, and operator complexity bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  app.add_option("--config", config_file, "key=value file; flags override its entries");
  std::map<std::string, std::string> flags;
  for (const auto& key : omegahat::cli::config_keys()) {
    if (key == "selfcheck") continue;
    app.add_option("--" + key, flags[key]);
  }
  bool selfcheck = false;
  app.add_flag("--selfcheck", selfcheck, "rerun validators on the emitted table");

  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& name : omegahat::cli::command_names()) {
    const auto space = name.find(' ');
    groups[name.substr(0, space)].push_back(name.substr(space + 1));
  }
  std::vector<std::pair<CLI::App*, std::string>> leaves;
  for (const auto& [group, subs] : groups) {
    auto* g = app.add_subcommand(group);
    g->require_subcommand(1);
    g->fallthrough();
    for (const auto& sub : subs) leaves.emplace_back(g->add_subcommand(sub)->fallthrough(), group + " " + sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(2, "", e.what());
  }

  std::string command;
  for (const auto& [sub, name] : leaves) {
    if (sub->parsed()) command = name;
  }

  ExperimentConfig config;
  try {
    if (!config_file.empty()) {
      for (const auto& [k, v] : omegahat::cli::read_key_values(config_file)) config.set(k, v);
    }
    for (const auto& key : omegahat::cli::config_keys()) {
      if (key != "selfcheck" && app.count("--" + key) > 0) config.set(key, flags[key]);
    }
    if (selfcheck) config.selfcheck = true;

    if (config.out.empty()) {
      omegahat::cli::run_command(command, config, std::cout);
    } else {
      std::ofstream out(config.out, std::ios::binary);
      if (!out) return fail(2, command, "cannot write '" + config.out + "'");
      omegahat::cli::run_command(command, config, out);
    }
  } catch (const omegahat::cli::ViolationError& e) {
    std::cout.flush();
    return fail(1, command, e.what(), e.details());
  } catch (const std::exception& e) {
    std::cout.flush();
    return fail(2, command, e.what());
  }
  return 0;
}
