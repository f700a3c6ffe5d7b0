#include "omegahat/philox.hpp"
#include "omegahat/semipovm.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace omegahat;
using namespace omegahat::povm;
using linalg::RationalHermitian;

namespace {

Rational q(const char* text) { return parse_rational(text); }

BlockScalarOperator diag_op(std::vector<Rational> d) {
  return BlockScalarOperator::square(RationalHermitian::diagonal(std::move(d)));
}

}  // namespace

TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, BitOrder) {
  PhiloxBits b(7, 3);
  std::string got;
  for (int i = 0; i < 40; ++i) got += b.next() ? '1' : '0';
  EXPECT_EQ(got, "0110001111100100000101100001011001000000");
}

TEST(Projective, Values) {
  SemiPovmStream p = projective_stream();
  EXPECT_TRUE(p.descriptor().computable_povm);
  for (Stage n = 1; n <= 5; ++n) {
    for (Index s = 1; s <= 5; ++s) {
      RationalHermitian expect = RationalHermitian::identity(s);
      expect *= pow2(-static_cast<long>(n) - 2);
      expect.set(s - 1, s - 1, expect(s - 1, s - 1) + Rational(1));
      EXPECT_EQ(p.eval(n, s), BlockScalarOperator::square(expect)) << n << "," << s;
      EXPECT_EQ(p.gbound(n, s), s);
    }
  }
}

TEST(Projective, ValidatesWithSlackCorrectedMass) {
  SemiPovmStream p = projective_stream();
  EXPECT_TRUE(validate_semipovm(p, 6).ok());
  for (Stage n = 1; n <= 6; ++n) {
    std::vector<std::pair<Rational, BlockScalarOperator>> terms;
    for (Index s = 1; s <= n; ++s) terms.emplace_back(Rational(1), p.eval(n, s));
    terms.emplace_back(-Rational(n) * pow2(-static_cast<long>(n) - 2), BlockScalarOperator::identity());
    EXPECT_TRUE(linalg::loewner_leq(linalg::combine(terms), BlockScalarOperator::identity())) << n;
  }
}

TEST(Projective, MeasurementOfBasisState) {
  SemiPovmStream p = projective_stream();
  const auto x = StateVector::basis(2);
  for (Stage n = 2; n <= 8; ++n) {
    auto d = measurement_distribution(p, n, x, 4);
    ASSERT_EQ(d.p.size(), 4u);
    EXPECT_GE(d.p[1], 1 - pow2(-static_cast<long>(n)));
    EXPECT_EQ(d.p[1], 1 + pow2(-static_cast<long>(n) - 2) - pow2(-static_cast<long>(n)));
    EXPECT_EQ(d.p[0], 0);
    EXPECT_EQ(d.p[2], 0);
    EXPECT_EQ(d.residual, 1 - d.p[1]);
  }
}

TEST(HilbertSchmidt, NormMismatch) {
  auto entries = [](Index) { return std::vector<SparseEntry>{{0, 0, Rational(1)}, {0, 1, RationalComplex(0, 1)}}; };
  // Entry sum is 1 + 2 = 3.
  auto bad = from_hilbert_schmidt(entries, [](Index) { return Rational(1); });
  EXPECT_THROW(bad.eval(1, 1), NormMismatch);
  auto ok = from_hilbert_schmidt([](Index) { return std::vector<SparseEntry>{{1, 0, RationalComplex(0, 1)}}; },
                                 [](Index) { return Rational(2); } /* wrong on purpose below */);
  EXPECT_THROW(ok.eval(1, 1), NormMismatch);
  auto good = from_hilbert_schmidt(
      [](Index) { return std::vector<SparseEntry>{{0, 0, Rational(3, 5)}, {1, 1, Rational(4, 5)}}; },
      [](Index) { return Rational(1); });
  EXPECT_EQ(good.eval(1, 1).block_size(), 2u);
}

TEST(HilbertSchmidt, RankOneFamilyBlockGrowth) {
  // R(s) = v v^H / 2 with v_i = 2^-i for i < 12, scaled so the HS norm is a
  // rational: |v v^H|_HS = |v|^2.
  auto entries = [](Index) {
    std::vector<SparseEntry> out;
    for (std::size_t i = 0; i < 12; ++i) {
      for (std::size_t j = i; j < 12; ++j) {
        out.push_back({i, j, RationalComplex(pow2(-static_cast<long>(i + j) - 3))});
      }
    }
    return out;
  };
  auto norm = [](Index) {
    Rational v2;
    for (long i = 0; i < 12; ++i) v2 += pow2(-2 * i - 2);
    return Rational(v2 / 2);
  };
  SemiPovmStream f = from_hilbert_schmidt(entries, norm);
  for (Stage n = 1; n <= 10; ++n) {
    EXPECT_EQ(f.gbound(n, 1), n + 1u);
    EXPECT_EQ(f.eval(n, 1).block_size(), n + 1u);
  }
  EXPECT_TRUE(validate_semipovm(f, 8).ok());
}

TEST(ScalarEmbed, MonotoneAndMassBounded) {
  auto r = semimeasure::constant_stream([](Index s) { return pow2(-2 * static_cast<long>(s)); }, "geom");
  SemiPovmStream f = scalar_embed(r);
  EXPECT_EQ(f.eval(3, 2), BlockScalarOperator::projector_scalar(3, q("1/16")));
  EXPECT_TRUE(f.descriptor().monotone);
  EXPECT_TRUE(f.descriptor().mass_bounded);
  EXPECT_TRUE(validate_semipovm(f, 7).ok());
}

TEST(Validate, ReportsWitnesses) {
  SemiPovmStream negative([](Stage, Index s) { return diag_op({Rational(1), Rational(-1, static_cast<long>(s))}); },
                          Descriptor{"neg"});
  auto r1 = validate_semipovm(negative, 2);
  ASSERT_FALSE(r1.ok());
  EXPECT_EQ(r1.violations.front().kind, "positivity");
  EXPECT_NE(r1.violations.front().detail.find("e_2"), std::string::npos);

  // Decreasing by 1/2 per stage breaks the 2^-n schedule at n = 1.
  SemiPovmStream shrinking([](Stage n, Index) { return diag_op({Rational(4) - Rational(n, 2)}); }, Descriptor{"shrink"});
  auto r2 = validate_semipovm(shrinking, 3);
  ASSERT_FALSE(r2.ok());
  EXPECT_EQ(r2.violations.front().kind, "schedule");
  EXPECT_EQ(r2.violations.front().n, 1u);

  SemiPovmStream heavy([](Stage, Index) { return diag_op({Rational(1, 2)}); }, Descriptor{"heavy", true, true});
  auto r3 = validate_semipovm(heavy, 3);
  ASSERT_FALSE(r3.ok());
  EXPECT_EQ(r3.violations.front().kind, "mass");
  EXPECT_EQ(r3.violations.front().n, 3u);

  SemiPovmStream wide([](Stage, Index) { return diag_op({Rational(0), Rational(1, 8)}); }, Descriptor{"wide"},
                      [](Stage, Index) { return std::size_t{1}; });
  auto r4 = validate_semipovm(wide, 1);
  ASSERT_EQ(r4.violations.size(), 1u);
  EXPECT_EQ(r4.violations.front().kind, "block");
}

namespace {

// Scalar input on the slack schedule h(n) = 1/(n+1): f'(n, s) = max(0, r(s) - h(n)).
Rational slack_h(Stage n, Index) { return Rational(1, static_cast<long>(n) + 1); }

SemiPovmStream slack_input() {
  return SemiPovmStream(
      [](Stage n, Index s) {
        Rational v = Rational(1, static_cast<long>(s) + 1) - slack_h(n, s);
        if (sgn(v) < 0) v = 0;
        return diag_op({v});
      },
      Descriptor{"slack"});
}

}  // namespace

TEST(Renormalize, SlackScheduleBecomesStandard) {
  SemiPovmStream out = renormalize_schedule(slack_input(), Schedule{slack_h, false});
  EXPECT_TRUE(validate_semipovm(out, 12).ok());
  // Lower bounds stay below the limit and approach it.
  for (Index s = 1; s <= 3; ++s) {
    const Rational limit(1, static_cast<long>(s) + 1);
    Rational prev = -1;
    for (Stage n = 1; n <= 12; ++n) {
      const Rational v = out.eval(n, s).block()(0, 0).re;
      EXPECT_LE(v - pow2(-static_cast<long>(n)), limit);
      prev = v;
    }
    EXPECT_GT(prev, limit - Rational(1, 4));
  }
}

TEST(Renormalize, StandardScheduleIsIdentity) {
  SemiPovmStream p = projective_stream();
  SemiPovmStream out = renormalize_schedule(p, Schedule::power_of_two());
  for (Stage n = 1; n <= 4; ++n) EXPECT_EQ(out.eval(n, 2), p.eval(n, 2));
}

TEST(Renormalize, ViolationIsReported) {
  SemiPovmStream decreasing([](Stage n, Index) { return diag_op({Rational(1, static_cast<long>(n))}); },
                            Descriptor{"decreasing"});
  SemiPovmStream out = renormalize_schedule(decreasing, Schedule{slack_h, false});
  try {
    out.eval(3, 1);
    FAIL() << "expected ScheduleViolation";
  } catch (const ScheduleViolation& e) {
    EXPECT_EQ(e.n, 1u);
    EXPECT_EQ(e.s, 1u);
  }
}

TEST(Measurement, SlackSubtractedUnlessMonotone) {
  auto r = semimeasure::constant_stream([](Index s) { return s == 1 ? q("1/2") : Rational(0); }, "half");
  SemiPovmStream mono = scalar_embed(r);
  const auto x = StateVector::basis(1);
  auto d = measurement_distribution(mono, 3, x, 2);
  EXPECT_EQ(d.p[0], q("1/2"));
  EXPECT_EQ(d.residual, q("1/2"));

  SemiPovmStream plain([mono](Stage n, Index s) { return mono.eval(n, s); }, Descriptor{"plain"});
  auto d2 = measurement_distribution(plain, 3, x, 2);
  EXPECT_EQ(d2.p[0], q("3/8"));
  EXPECT_EQ(d2.p[1], 0);
  EXPECT_EQ(d2.residual, q("5/8"));
}

TEST(Sampling, FrozenDraws) {
  MeasurementDistribution d;
  d.stage = 1;
  d.p = {q("1/3"), q("1/6"), q("1/4")};
  d.residual = q("1/4");
  const std::vector<int> expect = {0, 1, 2, 3, 3, 2, 1, 3, 2, 1, 0, 1, 2, 1, 1, 2};
  for (std::size_t i = 0; i < expect.size(); ++i) {
    auto o = sample_outcome(d, 12345, i);
    EXPECT_EQ(o ? static_cast<int>(*o) : 0, expect[i]) << i;
  }
}

TEST(Sampling, FrequenciesAndJobsInvariance) {
  MeasurementDistribution d;
  d.p = {q("1/3"), q("1/6"), Rational(0), q("1/4")};
  d.residual = q("1/4");
  const std::uint64_t n = 20000;
  auto c1 = sample_counts(d, 99, n, 1);
  auto c4 = sample_counts(d, 99, n, 4);
  EXPECT_EQ(c1, c4);
  EXPECT_EQ(c1[2], 0u);
  const double probs[] = {1.0 / 3, 1.0 / 6, 0, 0.25, 0.25};
  for (std::size_t i = 0; i < 5; ++i) {
    const double sd = std::sqrt(n * probs[i] * (1 - probs[i]));
    EXPECT_NEAR(static_cast<double>(c1[i]), n * probs[i], 5 * sd + 1) << i;
  }
}

TEST(Sampling, FullMassNeverCompletes) {
  MeasurementDistribution d;
  d.p = {q("1/2"), q("1/2")};
  for (std::uint64_t i = 0; i < 200; ++i) EXPECT_TRUE(sample_outcome(d, 5, i).has_value());
}

TEST(Measurement, Json) {
  auto d = measurement_distribution(projective_stream(), 2, StateVector::basis(2), 2);
  auto j = to_json(d, StateVector::basis(2));
  EXPECT_EQ(j["stage"], 2);
  EXPECT_EQ(j["outcomes"][1]["string"], "0");
  EXPECT_EQ(j["outcomes"][1]["p_num"], "13");
  EXPECT_EQ(j["outcomes"][1]["p_den"], "16");
  EXPECT_EQ(j["residual"], "3/16");
}
