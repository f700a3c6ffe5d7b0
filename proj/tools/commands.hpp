#pragma once

#include "config.hpp"

#include "json.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace omegahat::cli {

/// A validator or selfcheck found violations; exit status 1. The artifact
/// has already been written when this is thrown.
class ViolationError : public Error {
 public:
  ViolationError(std::string what, nlohmann::json details) : Error(std::move(what)), details_(std::move(details)) {}
  const nlohmann::json& details() const { return details_; }

 private:
  nlohmann::json details_;
};

/// Subcommand paths such as "omega approx".
const std::vector<std::string>& command_names();

/// Runs one subcommand, writing its artifact to `out`.
void run_command(const std::string& name, const ExperimentConfig& config, std::ostream& out);

}  // namespace omegahat::cli
