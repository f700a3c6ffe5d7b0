#pragma once

#include "omegahat/spectral.hpp"
#include "omegahat/universal.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace omegahat::ait {

using linalg::BlockScalarOperator;
using linalg::IntervalHermitian;
using linalg::json;
using povm::SemiPovmStream;

/// <s, t> = cantor(s - 1, t - 1) + 1 on integer codes; a bijection of the
/// positive integers onto themselves.
Index pair_strings(Index s, Index t);
std::pair<Index, Index> unpair(Index u);

/// Certified Loewner upper bound for -log2 M(s) at one stage.
struct HhatBound {
  Index s = 0;
  Stage stage = 0;
  Rational eps;
  Rational floor;           // c_s with c_s I <= M(s)
  Rational slack;           // 2^-n
  BlockScalarOperator lower;  // L_n = 1/2 (f_M(n,s) - 2^-n I) + 1/2 c_s I
  IntervalHermitian upper{1, {}};  // enclosure of -log2 L_n
};

/// L_n and the enclosure of -log2 L_n (entry widths <= eps).
/// NotPositiveDefinite when 2^-n >= c_s, i.e. n <= s + 2.
HhatBound hhat_upper(const universal::UniversalConstructor& uc, Index s, Stage n, const Rational& eps);
HhatBound hhat_upper(Index s, Stage n, const Rational& eps);

enum class Derived { Joint, Conditional, Mutual };
std::string to_string(Derived kind);
Derived derived_from_string(const std::string& name);

/// joint: H(<s,t>); conditional: H(<t,s>) - H(t); mutual: H(s) + H(t) - H(<s,t>).
/// Only the joint enclosure is a one-sided certificate; the others are
/// indicative (differences of upper bounds).
IntervalHermitian hhat_derived(const universal::UniversalConstructor& uc, Derived kind, Index s, Index t, Stage n,
                               const Rational& eps);

/// A partial map on integer codes, evaluated with a fuel budget. nullopt
/// means "no value within this fuel" (undefined, or not yet).
struct PartialMap {
  std::string name;
  std::function<std::optional<Index>(Index, std::uint64_t)> eval;
};

PartialMap identity_map();
PartialMap swap_pairs();         // <s,t> -> <t,s>
PartialMap pair_first();         // <s,t> -> s
PartialMap diagonal_collapse();  // <s,s> -> s, undefined off the diagonal
PartialMap duplicate();          // s -> <s,s>
PartialMap pair_with_lambda();   // s -> <s,lambda>
PartialMap empty_map();
/// VM program run with r0 = t; the first emitted value is psi(t), if >= 1.
PartialMap vm_map(Bits program);
/// Looks a map up by its name above ("vm:<bits>" for VM programs).
PartialMap map_from_name(const std::string& name);

struct TransportWitness {
  Stage n = 0;
  Index s = 0;
  Index image = 0;
  bool dominated = false;  // f_M(n, s) <= f'(n, psi(s))
};

struct TransportReport {
  std::string psi;
  Stage stages = 0;
  Index window = 0;
  std::vector<TransportWitness> witnesses;
  std::size_t failures() const;
};

struct Transport {
  SemiPovmStream stream;
  TransportReport report;
};

/// f'(n, s) = sum_{k <= h(n,s)} base(n + k, t(k, s)) where t(k, s) is the
/// k-th preimage of s found by the fuel-n enumeration of dom(psi) over
/// inputs <= n. The report checks base(n, s) <= f'(n, psi(s)) for n <= stages,
/// s <= window once s is enumerated.
Transport psi_transport(const PartialMap& psi, const SemiPovmStream& base, Stage stages = 8, Index window = 8);

/// Smallest dyadic c (grid 2^-4) with diag H-upper(psi(s)) <= diag H-upper(s) + c
/// on every listed s where psi(s) is defined. Empirical.
Rational transport_constant(const universal::UniversalConstructor& uc, const PartialMap& psi,
                            const std::vector<Index>& strings, Stage n, const Rational& eps);

/// eval(n, s) = max(<base(n, s) x, x> - 2^-n, 0).
semimeasure::SemiMeasureStream state_pairing(const SemiPovmStream& base, const linalg::StateVector& x);

json to_json(const HhatBound& b, const std::vector<std::pair<std::string, Rational>>& transport_constants = {});
/// Rows "s,bits,stage,i,lo,hi" for the diagonal of each bound (i = 0 is the tail).
void write_csv(std::ostream& out, const std::vector<HhatBound>& bounds);

}  // namespace omegahat::ait
