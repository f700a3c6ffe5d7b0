#pragma once

#include "omegahat/machine.hpp"
#include "omegahat/memo.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace omegahat::semimeasure {

enum class Provenance { MachineDerived, Converted, Mixture, Planted, Custom };
std::string to_string(Provenance p);

/// Stage-indexed rational approximants (n, s) -> value, monotone in n.
/// Strings are addressed by their integer codes (lambda -> 1).
class SemiMeasureStream {
 public:
  using Fn = std::function<Rational(Stage, Index)>;

  SemiMeasureStream(Fn fn, Provenance provenance, std::string label);

  Rational eval(Stage n, Index s) const { return memo_({n, s}); }
  Provenance provenance() const { return provenance_; }
  const std::string& label() const { return label_; }

 private:
  Memo<std::pair<Stage, Index>, Rational> memo_;
  Provenance provenance_;
  std::string label_;
};

/// n -> b_n, nondecreasing.
class IncreasingSequence {
 public:
  using Fn = std::function<Rational(Stage)>;
  explicit IncreasingSequence(Fn fn) : memo_([f = std::move(fn)](const Stage& n) { return f(n); }) {}
  Rational eval(Stage n) const { return memo_(n); }

 private:
  Memo<Stage, Rational> memo_;
};

class MassExceeded : public Error {
 public:
  using Error::Error;
};

using MachinePtr = std::shared_ptr<const machine::PrefixMachine>;

/// eval(n, s) = pv_lower(n, s).
SemiMeasureStream stream_from_pv(MachinePtr m);
/// eval(n, s) = 2^-complexity_upper(n, s), or 0 while s has no program.
SemiMeasureStream stream_from_complexity(MachinePtr m);
/// eval(n, s) = v(s) at every stage.
SemiMeasureStream constant_stream(std::function<Rational(Index)> v, std::string label);

struct Violation {
  std::string kind;  // "negative", "monotonicity", "mass", ...
  Stage n = 0;
  Stage n_next = 0;  // second stage of a monotonicity witness
  Index s = 0;
  std::string detail;
};

struct ValidationReport {
  Stage checked_up_to = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks eval >= 0, eval(n, s) <= eval(n+1, s) and sum_{s<=n} eval(n, s) <= 1
/// for n, s <= N.
ValidationReport validate_semimeasure(const SemiMeasureStream& stream, Stage N);

/// a_n = sum_{s<=n} eval(n, s).
IncreasingSequence to_increasing_sequence(const SemiMeasureStream& stream);

/// r(1) = 0 and r(s) = (b_s - b_{s-1}) / d, constant in the stage.
/// Partial sums up to `check_upto` are verified; MassExceeded if one exceeds 1.
SemiMeasureStream from_increasing_sequence(const IncreasingSequence& b, const Rational& d,
                                           Stage check_upto = 64);

struct DominationEntry {
  Stage n = 0;
  Index s = 0;
  bool found = false;
  Stage witness = 0;  // n' with c * r(n, s) <= m(n', s)
};

struct DominationReport {
  Rational c;
  Stage budget = 0;
  std::vector<DominationEntry> entries;
  std::size_t unresolved() const;
};

/// For n, s <= budget, searches n in [n, budget] for c r(n, s) <= m(n', s).
/// "found" is a certificate; "unresolved" refutes nothing.
DominationReport corroborate_domination(const SemiMeasureStream& m, const SemiMeasureStream& r,
                                        const Rational& c, Stage budget);

/// CSV rows "n,s,bits,num,den" for n <= stages, s <= window.
void write_csv(std::ostream& out, const SemiMeasureStream& stream, Stage stages, Index window);

}  // namespace omegahat::semimeasure
