#include "omegahat/catalog.hpp"

#include <fstream>
#include <sstream>

namespace omegahat::catalog {

using linalg::StateVector;

semimeasure::MachinePtr machine_by_name(const std::string& name, unsigned jobs) {
  if (name == "vm") return std::make_shared<machine::VmMachine>(jobs);
  if (name == "three-programs") {
    return std::make_shared<machine::TableMachine>(machine::TableMachine::parse(kThreePrograms, name));
  }
  std::ifstream probe(name);
  if (!probe) throw Error("unknown machine '" + name + "' (not vm, three-programs, or a readable file)");
  return std::make_shared<machine::TableMachine>(machine::TableMachine::load(name));
}

semimeasure::SemiMeasureStream semimeasure_by_name(const std::string& name) {
  if (name == "complexity") return semimeasure::stream_from_complexity(machine_by_name("vm"));
  if (name == "pv") return semimeasure::stream_from_pv(machine_by_name("vm"));
  if (name == "fixture") return semimeasure::stream_from_pv(machine_by_name("three-programs"));
  if (name == "geometric") {
    return semimeasure::constant_stream([](Index s) { return pow2(-static_cast<long>(s)); }, "geometric");
  }
  throw Error("unknown semi-measure '" + name + "'");
}

povm::SemiPovmStream semipovm_by_name(const std::string& name) {
  if (name == "projective") return povm::projective_stream();
  if (name == "scalar-embed") return povm::scalar_embed(semimeasure_by_name("fixture"));
  if (name == "shift-mix") return universal::shift_mix(povm::projective_stream());
  if (name == "zero") return universal::zero_stream();
  if (name == "universal") return universal::universal_stream();
  if (name.rfind("guarded:", 0) == 0) {
    const auto l = std::stoull(name.substr(8));
    if (l == 0) throw Error("guarded components start at l = 1");
    return universal::guarded_stream(l);
  }
  if (name.rfind("transport:", 0) == 0) {
    return ait::psi_transport(ait::map_from_name(name.substr(10)), universal::universal_stream(), 0, 0).stream;
  }
  throw Error("unknown semi-POVM stream '" + name + "'");
}

std::vector<std::string> standard_semipovm_names() {
  std::vector<std::string> names = {"projective", "scalar-embed", "shift-mix"};
  for (int l = 1; l <= 8; ++l) names.push_back("guarded:" + std::to_string(l));
  names.push_back("universal");
  names.push_back("transport:swap");
  return names;
}

StateVector state_from_spec(const std::string& spec) {
  if (spec.size() >= 2 && spec[0] == 'e' && spec.find_first_not_of("0123456789", 1) == std::string::npos) {
    return StateVector::basis(std::stoull(spec.substr(1)));
  }
  if (!spec.empty() && (spec[0] == '[' || spec[0] == '{')) {
    return linalg::state_from_json(linalg::json::parse(spec));
  }
  for (auto& [name, x] : fixture_states()) {
    if (name == spec) return std::move(x);
  }
  std::ifstream in(spec);
  if (!in) throw Error("cannot read state file '" + spec + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  linalg::json j;
  try {
    j = linalg::json::parse(buf.str());
  } catch (const linalg::json::exception& e) {
    throw Error("state file '" + spec + "' is not JSON: " + e.what());
  }
  return linalg::state_from_json(j);
}

std::vector<std::pair<std::string, StateVector>> fixture_states() {
  const Rational a(3, 5), b(4, 5), h(1, 2);
  const RationalComplex zero;
  return {
      {"e1", StateVector::basis(1)},
      {"e3", StateVector::basis(3)},
      {"real-pair", StateVector({a, b})},
      {"complex-pair", StateVector({zero, RationalComplex(Rational(0), a), zero, b})},
      {"uniform4", StateVector({h, RationalComplex(Rational(0), h), Rational(-h), h})},
  };
}

}  // namespace omegahat::catalog
