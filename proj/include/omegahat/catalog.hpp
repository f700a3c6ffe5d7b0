#pragma once

#include "omegahat/ait.hpp"

#include <string>
#include <utility>
#include <vector>

namespace omegahat::catalog {

/// Fixture with domain {0, 10, 110}: Kraft sum 7/8.
inline constexpr const char* kThreePrograms =
    "0    1\n"
    "10   0\n"
    "110  -\n";

/// "vm", "three-programs", or a path to a table file.
semimeasure::MachinePtr machine_by_name(const std::string& name, unsigned jobs = 1);

/// "complexity" and "pv" (over the VM), "fixture" (P of three-programs),
/// "geometric" (r(s) = 2^-s).
semimeasure::SemiMeasureStream semimeasure_by_name(const std::string& name);

/// "projective", "scalar-embed" (of the fixture semi-measure), "shift-mix"
/// (of projective), "zero", "universal", "guarded:<l>", "transport:<map>".
povm::SemiPovmStream semipovm_by_name(const std::string& name);
std::vector<std::string> standard_semipovm_names();

/// "e<k>", a fixture name, inline JSON ("[...]" or "{...}"), or a JSON file path.
linalg::StateVector state_from_spec(const std::string& spec);

/// Five fixed unit vectors, some complex, with support up to 4.
std::vector<std::pair<std::string, linalg::StateVector>> fixture_states();

}  // namespace omegahat::catalog
