#include "omegahat/ait.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace omegahat;
using namespace omegahat::ait;
using linalg::StateVector;
using machine::Instruction;
using machine::Op;

namespace {

/// Exact rational from a decimal literal such as "2.6293".
Rational decimal(const std::string& text) {
  const auto dot = text.find('.');
  const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  Rational den(1);
  for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
  return Rational(mpz_class(digits), den.get_num());
}

/// Oracle value known to 25 decimals lies inside [lo, hi].
void expect_encloses(const linalg::Interval& iv, const std::string& oracle) {
  const Rational v = decimal(oracle);
  const Rational tol = pow2(-80);
  EXPECT_LE(iv.lo, v + tol) << oracle;
  EXPECT_GE(iv.hi, v - tol) << oracle;
}

const Rational kEps = pow2(-20);

}  // namespace

// Values from tests/oracles/ait_oracle.py.
TEST(Pairing, MatchesCantorTable) {
  const Index table[4][4] = {{1, 3, 6, 10}, {2, 5, 9, 14}, {4, 8, 13, 19}, {7, 12, 18, 25}};
  for (Index s = 1; s <= 4; ++s) {
    for (Index t = 1; t <= 4; ++t) EXPECT_EQ(pair_strings(s, t), table[s - 1][t - 1]);
  }
  EXPECT_EQ(pair_strings(1000, 1000), 1998001U);
  EXPECT_EQ(pair_strings(Index(1) << 31, Index(1) << 31), 9223372032559808513ULL);
  EXPECT_THROW(pair_strings(Index(1) << 40, Index(1) << 40), Error);
  EXPECT_THROW(pair_strings(0, 1), Error);
}

TEST(Pairing, BijectionOnSmallCodes) {
  for (Index u = 1; u <= 1024; ++u) {
    auto [s, t] = unpair(u);
    EXPECT_EQ(pair_strings(s, t), u);
  }
  for (Index s = 1; s <= 32; ++s) {
    for (Index t = 1; t <= 32; ++t) EXPECT_EQ(unpair(pair_strings(s, t)), std::make_pair(s, t));
  }
  const Index big = pair_strings(Index(1) << 31, 12345);
  EXPECT_EQ(unpair(big), std::make_pair(Index(1) << 31, Index(12345)));
}

TEST(Hhat, TailAndBlockMatchOracle) {
  const auto b1 = hhat_upper(1, 8, kEps);
  EXPECT_EQ(b1.lower.tail(), Rational(31, 512));
  expect_encloses(b1.upper.tail(), "4.045803689613124791193876400");
  EXPECT_EQ(b1.lower.block()(0, 0).re, Rational(331, 2048));
  expect_encloses(b1.upper(0, 0).re, "2.629312593192782302389196825");
  const std::size_t last = b1.lower.block().dim() - 1;
  EXPECT_EQ(b1.lower.block()(last, last).re, Rational(503, 4096));
  expect_encloses(b1.upper(last, last).re, "3.025585410194472908204599548");

  const auto b2 = hhat_upper(2, 8, kEps);
  EXPECT_EQ(b2.lower.tail(), Rational(15, 512));
  expect_encloses(b2.upper.tail(), "5.093109404391481470675941626");
  EXPECT_EQ(b2.lower.block()(0, 0).re, Rational(39, 512));
  expect_encloses(b2.upper(0, 0).re, "3.714597781137751658149448401");

  const auto b3 = hhat_upper(3, 10, kEps);
  EXPECT_EQ(b3.lower.tail(), Rational(31, 2048));
  expect_encloses(b3.upper.tail(), "6.045803689613124791193876400");
}

TEST(Hhat, RejectsStagesBeforeTheFloorDominates) {
  EXPECT_THROW(hhat_upper(3, 5, kEps), linalg::NotPositiveDefinite);
  EXPECT_NO_THROW(hhat_upper(3, 6, kEps));
}

TEST(Hhat, DiagonalNonnegativeAndNarrow) {
  for (Index s = 1; s <= 4; ++s) {
    const auto b = hhat_upper(s, 10, kEps);
    EXPECT_GE(b.upper.tail().lo, 0);
    EXPECT_LE(b.upper.tail().width(), kEps);
    for (std::size_t i = 0; i < b.upper.dim(); ++i) {
      EXPECT_GE(b.upper(i, i).re.lo, 0);
      for (std::size_t j = 0; j < b.upper.dim(); ++j) EXPECT_LE(b.upper(i, j).width(), kEps);
    }
  }
}

TEST(Hhat, JensenAgainstScalarBound) {
  std::vector<StateVector> states = {StateVector::basis(1), StateVector::basis(3), StateVector::basis(40),
                                     StateVector({Rational(3, 5), Rational(0), Rational(4, 5)}),
                                     StateVector({RationalComplex(Rational(0), Rational(3, 5)), Rational(4, 5)})};
  for (Index s = 1; s <= 3; ++s) {
    const auto b = hhat_upper(s, 9, kEps);
    for (const auto& x : states) {
      const Rational q = linalg::quad_form(b.lower, x);
      const auto scalar = linalg::neg_log2_enclosure(q, 40);
      EXPECT_GE(linalg::quad_form(b.upper, x).hi, scalar.lo - kEps);
    }
  }
}

TEST(Hhat, DecreasesWithStage) {
  for (Index s = 1; s <= 2; ++s) {
    const auto a = hhat_upper(s, 8, kEps);
    const auto b = hhat_upper(s, 11, kEps);
    EXPECT_TRUE(linalg::loewner_leq(a.lower, b.lower));
    for (std::size_t k = 1; k <= b.upper.dim() + 2; ++k) {
      const auto x = StateVector::basis(k);
      EXPECT_LE(linalg::quad_form(b.upper, x).lo, linalg::quad_form(a.upper, x).hi);
    }
  }
}

TEST(Hhat, WithinConstantOfScalarComplexity) {
  const machine::VmMachine vm;
  const Stage n = 14;
  for (Index s = 1; s <= 3; ++s) {
    const auto k = machine::complexity_upper(vm, std::min<Stage>(n - 1 + static_cast<Stage>(s), 16), from_index(s));
    ASSERT_TRUE(k.has_value());
    const auto b = hhat_upper(s, n, kEps);
    const Rational bound(static_cast<long>(*k) + 4);
    for (std::size_t i = 0; i < b.upper.dim(); ++i) EXPECT_LE(b.upper(i, i).re.hi, bound) << "s=" << s << " i=" << i;
  }
}

TEST(Derived, JointIsTheBoundOfThePair) {
  const auto& uc = universal::default_constructor();
  const auto joint = hhat_derived(uc, Derived::Joint, 1, 2, 10, kEps);
  const auto direct = hhat_upper(uc, pair_strings(1, 2), 10, kEps).upper;
  ASSERT_EQ(joint.dim(), direct.dim());
  EXPECT_EQ(joint.tail().lo, direct.tail().lo);
  EXPECT_EQ(joint(0, 0).re.hi, direct(0, 0).re.hi);

  const auto cond = hhat_derived(uc, Derived::Conditional, 1, 2, 10, kEps);
  const auto mutual = hhat_derived(uc, Derived::Mutual, 1, 2, 10, kEps);
  EXPECT_GE(cond.dim(), 1U);
  EXPECT_GE(mutual.dim(), 1U);
  // H(<2,1>) - H(2) contains the exact tail difference of the two lower bounds.
  const auto h21 = hhat_upper(uc, pair_strings(2, 1), 10, kEps);
  const auto h2 = hhat_upper(uc, 2, 10, kEps);
  EXPECT_TRUE(cond.tail().overlaps(h21.upper.tail() - h2.upper.tail()));
}

TEST(Derived, NamesRoundTrip) {
  for (auto d : {Derived::Joint, Derived::Conditional, Derived::Mutual}) {
    EXPECT_EQ(derived_from_string(to_string(d)), d);
  }
  EXPECT_THROW(derived_from_string("entropy"), Error);
}

TEST(Maps, BuiltinsBehave) {
  const auto swap = swap_pairs();
  for (Index u = 1; u <= 100; ++u) EXPECT_EQ(swap.eval(*swap.eval(u, 0), 0), u);
  EXPECT_EQ(*pair_first().eval(pair_strings(5, 7), 0), 5U);
  EXPECT_EQ(*diagonal_collapse().eval(pair_strings(4, 4), 0), 4U);
  EXPECT_FALSE(diagonal_collapse().eval(pair_strings(4, 5), 0).has_value());
  EXPECT_EQ(*duplicate().eval(3, 0), pair_strings(3, 3));
  EXPECT_EQ(*pair_with_lambda().eval(3, 0), pair_strings(3, 1));
  EXPECT_FALSE(empty_map().eval(1, 1000).has_value());
  EXPECT_THROW(map_from_name("nope"), Error);
  EXPECT_EQ(map_from_name("swap").name, "swap");
}

TEST(Maps, VmProgramWithFuel) {
  const Bits succ = machine::assemble({{Op::Inc, 0, 0, 0}, {Op::Emit, 0, 0, 0}, {Op::End, 0, 0, 0}});
  const auto psi = map_from_name("vm:" + succ);
  EXPECT_EQ(psi.eval(5, 100), std::optional<Index>(6));
  EXPECT_FALSE(psi.eval(5, 1).has_value());
}

TEST(Transport, DominationHoldsForTotalAndPartialMaps) {
  const auto base = universal::universal_stream();
  for (const auto& psi : {identity_map(), swap_pairs(), duplicate(), diagonal_collapse()}) {
    const auto t = psi_transport(psi, base, 8, 8);
    EXPECT_FALSE(t.report.witnesses.empty()) << psi.name;
    EXPECT_EQ(t.report.failures(), 0U) << psi.name;
    const auto v = povm::validate_semipovm(t.stream, 8);
    EXPECT_TRUE(v.ok()) << psi.name << ": " << (v.ok() ? "" : v.violations.front().detail);
  }
}

TEST(Transport, EmptyMapGivesZeroStream) {
  const auto t = psi_transport(empty_map(), universal::universal_stream(), 6, 6);
  EXPECT_TRUE(t.report.witnesses.empty());
  for (Stage n = 1; n <= 6; ++n) {
    for (Index s = 1; s <= 6; ++s) EXPECT_TRUE(t.stream.eval(n, s).trimmed().block().dim() <= 1);
    EXPECT_EQ(t.stream.eval(n, 1).tail(), 0);
  }
}

TEST(Transport, IdentityShiftsOneStage) {
  const auto base = universal::universal_stream();
  const auto t = psi_transport(identity_map(), base, 4, 4);
  for (Stage n = 1; n <= 6; ++n) {
    for (Index s = 1; s <= n; ++s) {
      EXPECT_TRUE(linalg::is_psd(linalg::subtract(t.stream.eval(n, s), base.eval(n + 1, s))));
      EXPECT_TRUE(linalg::is_psd(linalg::subtract(base.eval(n + 1, s), t.stream.eval(n, s))));
    }
  }
}

TEST(Transport, EmpiricalConstants) {
  const auto& uc = universal::default_constructor();
  // Enclosure width alone rounds up to one grid step.
  EXPECT_EQ(transport_constant(uc, identity_map(), {1, 2, 3, 4, 5}, 10, pow2(-16)), Rational(1, 16));
  EXPECT_EQ(transport_constant(uc, swap_pairs(), {1, 2, 3, 4, 5}, 10, pow2(-16)), Rational(19, 8));
  EXPECT_EQ(transport_constant(uc, empty_map(), {1, 2, 3}, 10, pow2(-16)), 0);
}

TEST(Pairing, StatePairingIsASemimeasure) {
  const auto base = universal::universal_stream();
  const StateVector x({Rational(3, 5), Rational(4, 5)});
  const auto m = state_pairing(base, x);
  const auto v = semimeasure::validate_semimeasure(m, 10);
  EXPECT_TRUE(v.ok());
  const Rational q = linalg::quad_form(base.eval(9, 2), x) - pow2(-9);
  EXPECT_EQ(m.eval(9, 2), sgn(q) < 0 ? Rational(0) : q);
}

TEST(Report, CsvAndJson) {
  std::vector<HhatBound> bounds = {hhat_upper(1, 8, kEps), hhat_upper(2, 8, kEps)};
  std::ostringstream out;
  write_csv(out, bounds);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "s,bits,stage,i,lo,hi");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, bounds[0].upper.dim() + bounds[1].upper.dim() + 2);
  const std::string first_row = out.str().substr(out.str().find('\n') + 1);
  EXPECT_EQ(first_row.rfind("1,,8,0,", 0), 0U) << first_row;

  const auto j = to_json(bounds[1], {{"swap", Rational(19, 8)}});
  EXPECT_EQ(j["s"], 2);
  EXPECT_EQ(j["string"], "0");
  EXPECT_EQ(j["floor"], "1/16");
  EXPECT_EQ(j["transport_constants"]["swap"], "19/8");
  EXPECT_TRUE(j.contains("operator"));
}
