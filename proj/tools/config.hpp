#pragma once

#include "omegahat/rational.hpp"

#include <map>
#include <string>

namespace omegahat::cli {

/// Bad input to a command; reported as error JSON with exit status 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// All knobs of one experiment. Values come from a key=value file and are
/// then overridden by command-line flags.
struct ExperimentConfig {
  Stage stages = 10;
  Index window = 10;
  Rational eps = pow2(-20);
  std::uint64_t seed = 1;
  std::string checkpoint;  // written by `upovm build`
  std::string resume;      // checkpoint to start from
  std::string state = "e1";
  std::string format;  // csv | json; empty picks the command default
  std::string out;     // empty: stdout
  unsigned jobs = 1;
  std::uint64_t fuel = 64;
  std::uint64_t count = 100000;
  std::string machine = "vm";
  std::string stream;  // empty picks the command default
  std::string psi = "swap";
  std::string strings = "1,2,3";
  std::string derived;  // e.g. "joint:1,2"
  std::string sequence = "geometric";
  Rational d = 1;
  bool selfcheck = false;

  /// Applies one key=value pair; UsageError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  void check() const;
};

/// Parses "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_key_values(const std::string& path);

/// Keys accepted by ExperimentConfig::set, in a fixed order.
const std::vector<std::string>& config_keys();

/// Resolves a checkpoint path against $OMEGAHAT_CHECKPOINT_DIR when relative.
std::string checkpoint_path(const std::string& path);

}  // namespace omegahat::cli
