#include "omegahat/universal.hpp"

#include <gtest/gtest.h>

using namespace omegahat;
using namespace omegahat::universal;
using linalg::loewner_leq;
using linalg::scale;
using machine::Instruction;
using machine::Op;

namespace {

RationalHermitian scalar_block(std::size_t dim, const Rational& c) {
  RationalHermitian m = RationalHermitian::identity(dim);
  m *= c;
  return m;
}

/// Emitter index 1 is `first`; every other index never halts.
EmitterSource single(EmitterPtr first) {
  return [first](Index l) -> EmitterPtr {
    if (l == 1) return first;
    return std::make_shared<NeverEmitter>();
  };
}

/// VM program emitting the 1x1 matrix [1/3] on every input.
Bits third_program() {
  std::vector<Instruction> p;
  for (int i = 0; i < 3; ++i) {
    p.push_back({Op::Inc, 2});
    p.push_back({Op::Emit, 2});
  }
  p.push_back({Op::End});
  return machine::assemble(p);
}

}  // namespace

TEST(Emitters, Decoding) {
  EXPECT_EQ(decode_emitter(1)->describe(), "planted-floor");
  EXPECT_EQ(decode_emitter(2)->describe(), "complexity-plant");
  EXPECT_TRUE(decode_emitter(3)->never_halts());
  EXPECT_EQ(decode_emitter(8)->describe(), "vm:000");
  EXPECT_EQ(decode_emitter(1), decode_emitter(1));
  EXPECT_EQ(decode_emitter(77)->describe(), decode_emitter(77)->describe());
  EXPECT_THROW(decode_emitter(0), Error);
  const Index third = to_index(third_program());
  EXPECT_EQ(decode_emitter(third)->describe(), "vm:" + third_program());
}

TEST(Emitters, MatrixCodec) {
  auto m = linalg::RationalHermitian::from_rows(
      {{Rational(1, 2), RationalComplex(Rational(-1, 3), Rational(1, 5))},
       {RationalComplex(Rational(-1, 3), Rational(-1, 5)), Rational(0)}});
  auto code = encode_matrix(m);
  EXPECT_EQ(code, (std::vector<std::uint64_t>{2, 2, 2, 1, 3, 2, 5, 0, 1}));
  EXPECT_EQ(decode_matrix(code), m);
  std::string why;
  EXPECT_FALSE(decode_matrix({1, 2}, &why));
  EXPECT_NE(why.find("expected 3"), std::string::npos);
  EXPECT_FALSE(decode_matrix({1, 2, 0}, &why));
  EXPECT_EQ(why, "zero denominator");
  EXPECT_FALSE(decode_matrix({9}, &why));
}

TEST(Emitters, VmEmitterRuns) {
  VmEmitter e(third_program());
  Emission out = e.run(4, 2, 100);
  ASSERT_EQ(out.status, EmitStatus::Value);
  EXPECT_EQ(out.value, RationalHermitian::diagonal({Rational(1, 3)}));
  EXPECT_EQ(e.run(4, 2, 3).status, EmitStatus::Running);
  EXPECT_EQ(VmEmitter("000").run(1, 1, 10).status, EmitStatus::Undefined);
}

TEST(Guarded, ConditionThreeFreezesTable) {
  Dovetailer d({}, single(std::make_shared<VmEmitter>(third_program())));
  d.advance_to(8);
  // Steps 1..3 pass; from step 4 on the row sum 4/3 exceeds I.
  for (Stage n = 1; n <= 8; ++n) {
    for (Index s = 1; s <= 5; ++s) {
      const bool set = s <= std::min<Stage>(n, 3);
      EXPECT_EQ(d.component(1, n, s),
                set ? linalg::BlockScalarOperator::square(scalar_block(1, Rational(1, 3)))
                    : linalg::BlockScalarOperator::zero())
          << n << "," << s;
    }
  }
  ASSERT_GE(d.log().size(), 5u);
  EXPECT_TRUE(d.log()[2].accepted);
  EXPECT_FALSE(d.log()[3].accepted);
  EXPECT_EQ(d.log()[3].step, 4u);
  EXPECT_NE(d.log()[3].detail.find("(iii)"), std::string::npos);
  EXPECT_TRUE(d.audit().empty());
}

TEST(Guarded, NeverHaltingIsZero) {
  Dovetailer d({}, single(std::make_shared<NeverEmitter>()));
  d.advance_to(6);
  for (Stage n = 1; n <= 6; ++n) EXPECT_EQ(d.component(1, n, 1), linalg::BlockScalarOperator::zero());
  EXPECT_TRUE(d.log().empty());
  EXPECT_EQ(d.procedures()[0].stalls(), 6u);
}

TEST(Guarded, SlowEmitterStallsThenCatchesUp) {
  // Needs 150 steps per input; fuel at stage N is 64 N.
  auto slow = std::make_shared<FunctionEmitter>(
      [](Stage, Index s, std::uint64_t fuel) {
        if (fuel < 150) return Emission{EmitStatus::Running, {}, fuel, {}};
        return Emission{EmitStatus::Value, scalar_block(1, pow2(-static_cast<long>(s) - 1)), 150, {}};
      },
      "slow");
  Dovetailer d({}, single(slow));
  d.advance_to(5);
  EXPECT_EQ(d.procedures()[0].stalls(), 2u);
  EXPECT_EQ(d.component(1, 2, 1), linalg::BlockScalarOperator::zero());
  EXPECT_EQ(d.component(1, 3, 1), linalg::BlockScalarOperator::square(scalar_block(1, Rational(1, 4))));
  EXPECT_EQ(d.procedures()[0].step(), 4u);
}

TEST(Guarded, ConditionTwoRejectsDecrease) {
  auto shrinking = std::make_shared<FunctionEmitter>(
      [](Stage k, Index, std::uint64_t) {
        return Emission{EmitStatus::Value, scalar_block(1, Rational(1, static_cast<long>(k) + 4)), 1, {}};
      },
      "shrinking");
  Dovetailer d({}, single(shrinking));
  d.advance_to(3);
  // Step 2 would lower h(1) from 1/5 to 1/6.
  EXPECT_TRUE(d.log()[0].accepted);
  EXPECT_FALSE(d.log()[1].accepted);
  EXPECT_NE(d.log()[1].detail.find("(ii)"), std::string::npos);
  EXPECT_EQ(d.component(1, 3, 1), linalg::BlockScalarOperator::square(scalar_block(1, Rational(1, 5))));
}

TEST(ShiftMix, ZeroStreamFormula) {
  SemiPovmStream f = shift_mix(zero_stream());
  for (Stage n = 1; n <= 6; ++n) {
    for (Index s = 1; s <= 6; ++s) {
      const Rational c = pow2(-static_cast<long>(s) - 1) * (1 - pow2(-static_cast<long>(n)));
      EXPECT_EQ(f.eval(n, s), linalg::BlockScalarOperator::square(scalar_block(n + s, c)));
    }
  }
  EXPECT_TRUE(povm::validate_semipovm(f, 10).ok());
}

TEST(ShiftMix, ProjectiveDiagonalApproachesLimit) {
  SemiPovmStream f = shift_mix(povm::projective_stream());
  for (Index s = 1; s <= 4; ++s) {
    const Rational limit = Rational(1, 2) + pow2(-static_cast<long>(s) - 1);
    Rational prev = 0;
    for (Stage n = 1; n <= 12; ++n) {
      const Rational v = f.eval(n, s).block()(s - 1, s - 1).re;
      EXPECT_GE(v, prev);
      EXPECT_LT(v, limit + pow2(-static_cast<long>(n)));
      prev = v;
    }
    EXPECT_GT(prev, limit - pow2(-9));
  }
  EXPECT_TRUE(povm::validate_semipovm(f, 10).ok());
}

TEST(Universal, PlantedFloorComponent) {
  UniversalConstructor uc;
  SemiPovmStream floor = uc.guarded_stream(1);
  for (Stage n = 1; n <= 8; ++n) {
    for (Index s = 1; s <= n + 4; ++s) {
      const Rational c = pow2(-static_cast<long>(s) - 1) * (1 - pow2(-static_cast<long>(n)));
      EXPECT_EQ(floor.eval(n, s), linalg::BlockScalarOperator::square(scalar_block(n + s, c)));
    }
  }
  // Certified, so the dovetailer never guards or logs it.
  uc.advance_to(8);
  for (const auto& e : uc.log()) EXPECT_NE(e.l, 1U);
}

TEST(Universal, StageOneAndFloor) {
  UniversalConstructor uc;
  SemiPovmStream m = uc.universal_stream();
  SemiPovmStream f1 = uc.guarded_stream(1);
  EXPECT_EQ(m.eval(1, 1), scale(Rational(1, 2), f1.eval(1, 1)));
  EXPECT_EQ(scalar_floor(1), Rational(1, 8));
  EXPECT_EQ(scalar_floor(2), Rational(1, 16));
  for (Stage n = 1; n <= 10; ++n) {
    for (Index s = 1; s <= 12; ++s) {
      auto bound = linalg::BlockScalarOperator::projector_scalar(
          n + s, scalar_floor(s) * (1 - pow2(-static_cast<long>(n))));
      EXPECT_TRUE(loewner_leq(bound, m.eval(n, s))) << n << "," << s;
    }
  }
}

TEST(Universal, ValidatesAndStaysBelowIdentity) {
  UniversalConstructor uc;
  SemiPovmStream m = uc.universal_stream();
  EXPECT_TRUE(povm::validate_semipovm(m, 10).ok());
  for (Stage n = 1; n <= 10; ++n) {
    const auto cap = scale(1 - pow2(-static_cast<long>(n)), linalg::BlockScalarOperator::identity());
    for (Index s = 1; s <= 10; ++s) EXPECT_TRUE(loewner_leq(m.eval(n, s), cap));
  }
  for (Index l = 1; l <= 8; ++l) EXPECT_TRUE(povm::validate_semipovm(uc.guarded_stream(l), 8).ok()) << l;
  EXPECT_TRUE(uc.audit().empty());
}

TEST(Universal, OmegaHatLowerMonotone) {
  UniversalConstructor uc;
  EXPECT_EQ(uc.omega_hat_lower(1, 1), scale(Rational(1, 2), uc.guarded_stream(1).eval(1, 1)));
  for (Stage n = 1; n < 10; ++n) {
    for (Index m = 1; m < 10; ++m) {
      const auto w = uc.omega_hat_lower(n, m);
      EXPECT_TRUE(loewner_leq(w, uc.omega_hat_lower(n + 1, m + 1)));
      EXPECT_TRUE(loewner_leq(w, uc.omega_hat_lower(n, m + 1)));
      EXPECT_TRUE(loewner_leq(w, linalg::BlockScalarOperator::identity()));
    }
  }
}

TEST(Checkpoint, ResumeMatchesUninterrupted) {
  UniversalConstructor straight;
  straight.advance_to(12);

  UniversalConstructor first;
  first.advance_to(10);
  const std::string saved = first.checkpoint().dump();
  UniversalConstructor resumed(Dovetailer::from_json(linalg::json::parse(saved)));
  resumed.advance_to(12);
  EXPECT_EQ(resumed.checkpoint().dump(), straight.checkpoint().dump());
  EXPECT_EQ(resumed.universal_stream().eval(11, 3), straight.universal_stream().eval(11, 3));
  EXPECT_EQ(resumed.universal_stream().eval(7, 2), straight.universal_stream().eval(7, 2));

  UniversalConstructor fresh;
  EXPECT_EQ(Dovetailer::from_json(fresh.checkpoint()).to_json(), fresh.checkpoint());
}

TEST(Checkpoint, JobsDoNotChangeState) {
  UniversalConstructor one({64, 1});
  UniversalConstructor three({64, 3});
  one.advance_to(9);
  three.advance_to(9);
  EXPECT_EQ(one.checkpoint().dump(), three.checkpoint().dump());
}

TEST(Checkpoint, RejectsForeignFiles) {
  UniversalConstructor uc;
  uc.advance_to(3);
  auto j = uc.checkpoint();
  auto bumped = j;
  bumped["version"] = 2;
  EXPECT_THROW(Dovetailer::from_json(bumped), FormatVersionMismatch);
  EXPECT_THROW(Dovetailer::from_json(linalg::json::parse("{\"hello\": 1}")), FormatVersionMismatch);
  auto truncated = j;
  truncated["procedures"].erase(1);
  EXPECT_THROW(Dovetailer::from_json(truncated), FormatVersionMismatch);
  auto garbled = j;
  garbled["procedures"][0]["accepted"][0]["changes"][0]["h"] = "oops";
  EXPECT_THROW(Dovetailer::from_json(garbled), FormatVersionMismatch);
}
