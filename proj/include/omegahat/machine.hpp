#pragma once

#include "omegahat/vm.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace omegahat::machine {

struct Discovery {
  Bits program;
  Bits output;
  std::uint64_t steps = 0;
};

/// Halting programs found at one stage of the dovetailed enumeration.
struct EnumerationStage {
  Stage stage = 0;
  std::vector<Discovery> discovered;  // canonical string order of programs
  Rational kraft_sum;                 // sum of 2^-|p|
};

/// Per-stage aggregates used by the Omega, P_V and H_V approximants.
struct StageSummary {
  Rational kraft_sum;
  std::map<Bits, Rational> mass_by_output;
  std::map<Bits, std::size_t> min_length_by_output;
};

/// A self-delimiting machine. Stage n of its enumeration contains the
/// programs of length <= n that halt within fuel n.
class PrefixMachine {
 public:
  virtual ~PrefixMachine() = default;

  virtual std::string name() const = 0;
  virtual RunOutcome run(std::string_view program, std::uint64_t fuel) const = 0;
  virtual EnumerationStage enumerate(Stage stage) const = 0;

  /// Memoized aggregates of enumerate(stage).
  const StageSummary& summary(Stage stage) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<Stage, std::shared_ptr<const StageSummary>> summaries;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// The register VM of vm.hpp. Enumeration explores program prefixes
/// depth-first, extending a prefix only when a run asks for more tape.
class VmMachine final : public PrefixMachine {
 public:
  explicit VmMachine(unsigned jobs = 1) : jobs_(jobs == 0 ? 1 : jobs) {}

  std::string name() const override { return "vm"; }
  RunOutcome run(std::string_view program, std::uint64_t fuel) const override {
    return run_program(program, fuel);
  }
  EnumerationStage enumerate(Stage stage) const override;

 private:
  unsigned jobs_;
  mutable std::mutex catalog_mutex_;
  mutable Stage catalog_depth_ = 0;
  mutable std::vector<Discovery> catalog_;
};

/// Table-driven machine for fixtures: listed programs halt with the given
/// output once fuel reaches their requirement.
class TableMachine final : public PrefixMachine {
 public:
  struct Entry {
    Bits program;
    Bits output;
    std::uint64_t fuel = 0;  // steps needed; defaults to |program|
  };

  /// Throws Error if the programs are not prefix-free.
  explicit TableMachine(std::vector<Entry> entries, std::string name = "table");

  /// Lines "program output [fuel]"; "-" stands for the empty string and '#'
  /// starts a comment.
  static TableMachine parse(std::string_view text, std::string name = "table");
  static TableMachine load(const std::string& path);

  std::string name() const override { return name_; }
  RunOutcome run(std::string_view program, std::uint64_t fuel) const override;
  EnumerationStage enumerate(Stage stage) const override;
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
  std::string name_;
};

/// Canonical order on strings: shorter first, then lexicographic.
bool canonical_less(const Bits& a, const Bits& b);

EnumerationStage enumerate_halting(const PrefixMachine& m, Stage stage);
/// sum over discovered programs of 2^-|p|.
Rational omega_lower(const PrefixMachine& m, Stage stage);
/// Length of the shortest discovered program with output s.
std::optional<std::size_t> complexity_upper(const PrefixMachine& m, Stage stage, const Bits& s);
/// sum of 2^-|p| over discovered programs with output s.
Rational pv_lower(const PrefixMachine& m, Stage stage, const Bits& s);

/// True if no program of the list is a proper prefix of another (or equal).
bool is_prefix_free(const std::vector<Bits>& programs);

}  // namespace omegahat::machine
