#include "config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <vector>

namespace omegahat::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t positive(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty() || value[0] == '-' || v == 0) {
    throw UsageError(key + " must be a positive integer, got '" + value + "'");
  }
  return v;
}

Rational rational(const std::string& key, const std::string& value) {
  try {
    return parse_rational(value);
  } catch (const Error&) {
    throw UsageError(key + " must be a rational \"num/den\", got '" + value + "'");
  }
}

bool is_dyadic(const Rational& q) {
  const mpz_class& den = q.get_den();
  return mpz_popcount(den.get_mpz_t()) == 1;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {"stages", "window", "eps", "seed", "checkpoint", "resume",
                                                "state", "format", "out", "jobs", "fuel", "count",
                                                "machine", "stream", "psi", "strings", "derived", "sequence",
                                                "d", "selfcheck"};
  return keys;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "stages") {
    stages = static_cast<Stage>(positive(key, value));
  } else if (key == "window") {
    window = positive(key, value);
  } else if (key == "eps") {
    eps = rational(key, value);
  } else if (key == "seed") {
    // Seed 0 is allowed by the sampler but kept positive like every numeric field.
    seed = positive(key, value);
  } else if (key == "checkpoint") {
    checkpoint = value;
  } else if (key == "resume") {
    resume = value;
  } else if (key == "state") {
    state = value;
  } else if (key == "format") {
    if (value != "csv" && value != "json") throw UsageError("format must be csv or json");
    format = value;
  } else if (key == "out") {
    out = value;
  } else if (key == "jobs") {
    jobs = static_cast<unsigned>(positive(key, value));
  } else if (key == "fuel") {
    fuel = positive(key, value);
  } else if (key == "count") {
    count = positive(key, value);
  } else if (key == "machine") {
    machine = value;
  } else if (key == "stream") {
    stream = value;
  } else if (key == "psi") {
    psi = value;
  } else if (key == "strings") {
    strings = value;
  } else if (key == "derived") {
    derived = value;
  } else if (key == "sequence") {
    sequence = value;
  } else if (key == "d") {
    d = rational(key, value);
  } else if (key == "selfcheck") {
    if (value != "true" && value != "false") throw UsageError("selfcheck must be true or false");
    selfcheck = value == "true";
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

void ExperimentConfig::check() const {
  if (sgn(eps) <= 0 || !is_dyadic(eps)) throw UsageError("eps must be a positive dyadic rational");
  if (sgn(d) <= 0) throw UsageError("d must be positive");
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(number) + ": expected key=value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::string checkpoint_path(const std::string& path) {
  namespace fs = std::filesystem;
  const char* dir = std::getenv("OMEGAHAT_CHECKPOINT_DIR");
  if (dir == nullptr || *dir == '\0' || fs::path(path).is_absolute()) return path;
  return (fs::path(dir) / path).string();
}

}  // namespace omegahat::cli
