#include "omegahat/semimeasure.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace omegahat::semimeasure {
namespace {

using machine::TableMachine;
using machine::VmMachine;

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

MachinePtr fixture(const std::string& file) {
  return std::make_shared<TableMachine>(TableMachine::load(std::string(OMEGAHAT_FIXTURE_DIR) + "/" + file));
}

SemiMeasureStream geometric() {
  return constant_stream([](Index s) { return pow2(-static_cast<long>(s)); }, "geometric");
}

TEST(StreamFromPv, FixtureValues) {
  auto pv = stream_from_pv(fixture("three_programs.txt"));
  // output "1" has the single producer "0"
  EXPECT_EQ(pv.eval(1, to_index("1")), q(1, 2));
  EXPECT_EQ(pv.eval(9, to_index("1")), q(1, 2));
  EXPECT_EQ(pv.eval(1, to_index("0")), 0);
  EXPECT_EQ(pv.eval(2, to_index("0")), q(1, 4));
  EXPECT_TRUE(validate_semimeasure(pv, 24).ok());
}

TEST(StreamFromPv, VmMonotoneAndMassMatchesOmega) {
  auto vm = std::make_shared<VmMachine>();
  auto pv = stream_from_pv(vm);
  for (Stage n = 1; n < 16; ++n) {
    for (Index s = 1; s <= 64; ++s) EXPECT_LE(pv.eval(n, s), pv.eval(n + 1, s));
  }
  // Every output at stage n has length <= n, so its code is below 2^(n+1).
  for (Stage n = 1; n <= 12; ++n) {
    Rational total;
    for (Index s = 1; s < (Index{1} << (n + 1)); ++s) total += pv.eval(n, s);
    EXPECT_EQ(total, machine::omega_lower(*vm, n));
    EXPECT_LE(total, 1);
  }
  EXPECT_TRUE(validate_semimeasure(pv, 16).ok());
}

TEST(StreamFromComplexity, FixtureValues) {
  auto m = fixture("two_producers.txt");
  auto h = stream_from_complexity(m);
  auto pv = stream_from_pv(m);
  EXPECT_EQ(h.eval(3, to_index("11")), 0);
  for (Stage n = 1; n < 7; ++n) EXPECT_EQ(h.eval(n, 1), 0);
  for (Stage n = 7; n < 12; ++n) EXPECT_EQ(h.eval(n, 1), q(1, 8));
  EXPECT_EQ(h.eval(5, to_index("1")), q(1, 4));
  for (Index s = 1; s <= 8; ++s) EXPECT_LE(h.eval(20, s), pv.eval(20, s));
  EXPECT_TRUE(validate_semimeasure(h, 24).ok());
}

TEST(Validate, CatchesAdversarialStreams) {
  SemiMeasureStream drop([](Stage n, Index s) { return (s == 3 && n == 2) ? q(1, 16) : q(1, 8) * (s == 3); },
                         Provenance::Custom, "drop");
  auto r1 = validate_semimeasure(drop, 4);
  ASSERT_EQ(r1.violations.size(), 1u);
  EXPECT_EQ(r1.violations[0].kind, "monotonicity");
  EXPECT_EQ(r1.violations[0].n, 1u);
  EXPECT_EQ(r1.violations[0].n_next, 2u);
  EXPECT_EQ(r1.violations[0].s, 3u);

  SemiMeasureStream heavy([](Stage n, Index s) { return (n >= 3 && s <= 3) ? q(3, 8) : q(0); },
                          Provenance::Custom, "heavy");
  auto r2 = validate_semimeasure(heavy, 3);
  ASSERT_EQ(r2.violations.size(), 1u);
  EXPECT_EQ(r2.violations[0].kind, "mass");
  EXPECT_EQ(r2.violations[0].n, 3u);
}

TEST(IncreasingSequence, FromStreams) {
  auto zero = constant_stream([](Index) { return Rational(0); }, "zero");
  auto a0 = to_increasing_sequence(zero);
  for (Stage n = 1; n <= 10; ++n) EXPECT_EQ(a0.eval(n), 0);
  auto a = to_increasing_sequence(geometric());
  for (Stage n = 1; n <= 30; ++n) EXPECT_EQ(a.eval(n), 1 - pow2(-static_cast<long>(n)));
}

TEST(FromIncreasingSequence, Geometric) {
  IncreasingSequence b([](Stage n) { return Rational(1 - pow2(-static_cast<long>(n))); });
  auto r = from_increasing_sequence(b, q(1));
  EXPECT_EQ(r.eval(1, 1), 0);
  Rational sum;
  for (Index s = 2; s <= 64; ++s) {
    EXPECT_EQ(r.eval(1, s), pow2(-static_cast<long>(s)));
    EXPECT_EQ(r.eval(40, s), pow2(-static_cast<long>(s)));
  }
  for (Stage N = 1; N <= 64; ++N) {
    sum += r.eval(N, N);
    EXPECT_EQ(sum, b.eval(N) - b.eval(1));
  }
  EXPECT_TRUE(validate_semimeasure(r, 24).ok());
}

TEST(FromIncreasingSequence, ConstantAndOmega) {
  IncreasingSequence c([](Stage) { return q(1, 3); });
  auto r = from_increasing_sequence(c, q(1));
  for (Index s = 1; s <= 20; ++s) EXPECT_EQ(r.eval(5, s), 0);

  auto vm = std::make_shared<VmMachine>();
  IncreasingSequence omega([vm](Stage n) { return machine::omega_lower(*vm, n); });
  auto ro = from_increasing_sequence(omega, q(1), 14);
  EXPECT_TRUE(validate_semimeasure(ro, 14).ok());
}

TEST(FromIncreasingSequence, MassExceeded) {
  IncreasingSequence b([](Stage n) { return Rational(2 - pow2(-static_cast<long>(n - 1)) * 2); });
  EXPECT_THROW(from_increasing_sequence(b, q(1)), MassExceeded);
  EXPECT_NO_THROW(from_increasing_sequence(b, q(2)));
}

TEST(Domination, Examples) {
  auto zero = constant_stream([](Index) { return Rational(0); }, "zero");
  auto pv = stream_from_pv(fixture("two_producers.txt"));
  auto rep0 = corroborate_domination(pv, zero, q(1), 8);
  EXPECT_EQ(rep0.unresolved(), 0u);
  auto rep1 = corroborate_domination(pv, pv, q(1), 8);
  EXPECT_EQ(rep1.unresolved(), 0u);
  for (const auto& e : rep1.entries) EXPECT_EQ(e.witness, e.n);
  auto rep2 = corroborate_domination(zero, geometric(), q(1), 4);
  EXPECT_EQ(rep2.unresolved(), rep2.entries.size());
}

TEST(Csv, Rows) {
  std::ostringstream out;
  write_csv(out, geometric(), 1, 2);
  EXPECT_EQ(out.str(), "n,s,bits,num,den\n1,1,,1,2\n1,2,0,1,4\n");
}

}  // namespace
}  // namespace omegahat::semimeasure
