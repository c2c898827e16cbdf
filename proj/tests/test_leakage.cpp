#include <doctest.h>

#include <random>
#include <set>

#include <qloss/correction.hpp>
#include <qloss/leakage.hpp>

#include "support.hpp"

using namespace qloss;
using testsupport::Complexd;

TEST_SUITE("leakage") {

TEST_CASE("the eight levels partition into the five signature classes") {
  std::set<SignatureClassId> seen;
  int members = 0;
  for (const auto& level : allLevels()) {
    const auto cls = signatureOf(level);
    seen.insert(cls.id);
    members += 1;
    // Every member of the reported class maps back to the same class.
    for (const auto& m : cls.members) CHECK(signatureOf(m).id == cls.id);
  }
  CHECK(members == 8);
  CHECK(seen.size() == 5);

  CHECK(signatureOf(LevelLabel{2, 2}).members.size() == 1);
  CHECK(signatureOf(LevelLabel{2, -2}).members.size() == 1);
  CHECK(signatureOf(LevelLabel{1, 1}).id == signatureOf(LevelLabel{2, -1}).id);
  CHECK(signatureOf(LevelLabel{1, -1}).id == signatureOf(LevelLabel{2, 1}).id);
  CHECK(signatureOf(LevelLabel{1, 0}).id == SignatureClassId::kQubit);
  CHECK(signatureOf(LevelLabel{2, 0}).id == SignatureClassId::kQubit);

  CHECK_THROWS_AS(signatureOf(LevelLabel{3, 0}), DomainError);
  CHECK_THROWS_AS(signatureOf(LevelLabel{1, 2}), DomainError);
}

TEST_CASE("classification identifies every leaked level exactly") {
  std::mt19937_64 rng(41);
  for (const auto& hidden : leakedLevels()) {
    const auto result = classify(hidden, rng);
    CHECK_FALSE(result.in_qubit_subspace);
    REQUIRE(result.leaked_level.has_value());
    CHECK(*result.leaked_level == hidden);
    CHECK(result.plan.measurementCount() <= 2);
    CHECK(result.plan.unitaryCount() <= 1);
  }
}

TEST_CASE("singletons resolve in one measurement with no unitary") {
  std::mt19937_64 rng(42);
  for (const auto& hidden : {LevelLabel{2, 2}, LevelLabel{2, -2}}) {
    const auto result = classify(hidden, rng);
    CHECK(result.plan.measurementCount() == 1);
    CHECK(result.plan.unitaryCount() == 0);
  }
}

TEST_CASE("degenerate pairs need the selective shelving step") {
  std::mt19937_64 rng(43);
  const auto result = classify(LevelLabel{1, 1}, rng);
  REQUIRE(result.plan.steps.size() == 3);
  CHECK(result.plan.steps[0].kind == PlanStepKind::kMeasureSignature);
  CHECK(result.plan.steps[1].kind == PlanStepKind::kSelectiveUnitary);
  CHECK(*result.plan.steps[1].from == LevelLabel{1, 1});
  CHECK(*result.plan.steps[1].to == LevelLabel{2, 0});
  CHECK(result.plan.steps[2].kind == PlanStepKind::kMeasureSignature);
  CHECK(*result.plan.steps[2].observed == SignatureClassId::kQubit);

  const auto partner = classify(LevelLabel{2, -1}, rng);
  CHECK(*partner.plan.steps[2].observed == SignatureClassId::kPairPlus);
  CHECK(*partner.leaked_level == LevelLabel{2, -1});

  // Mirror pair uses the symmetric unitary.
  const auto mirror = classify(LevelLabel{1, -1}, rng);
  CHECK(*mirror.plan.steps[1].from == LevelLabel{1, -1});
  CHECK(*mirror.leaked_level == LevelLabel{1, -1});
}

TEST_CASE("qubit levels terminate immediately and stay untouched") {
  std::mt19937_64 rng(44);
  for (const auto& hidden : {kQubitZero, kQubitOne}) {
    const auto result = classify(hidden, rng);
    CHECK(result.in_qubit_subspace);
    CHECK_FALSE(result.leaked_level.has_value());
    CHECK(result.plan.measurementCount() == 1);
    CHECK(result.plan.unitaryCount() == 0);
    CHECK(simulatePlan(hidden, result.plan) == hidden);
  }
}

TEST_CASE("return plans end in the qubit ground state") {
  std::mt19937_64 rng(45);
  for (const auto& hidden : leakedLevels()) {
    const auto cls = classify(hidden, rng);
    const auto ret = returnToGround(*cls.leaked_level);
    CHECK_FALSE(ret.qubit_level_noop);
    CHECK_FALSE(ret.plan.steps.empty());
    // Composition audit: classify may already have moved the atom; the
    // return plan must continue from there and land in (1,0).
    const LevelLabel after_classify = simulatePlan(hidden, cls.plan);
    CHECK(after_classify == postClassificationLevel(hidden));
    CHECK(simulatePlan(after_classify, ret.plan) == kQubitZero);
  }
}

TEST_CASE("returning a qubit level is a warned no-op") {
  const auto ret = returnToGround(kQubitZero);
  CHECK(ret.qubit_level_noop);
  CHECK(ret.plan.steps.empty());
  CHECK(simulatePlan(kQubitOne, returnToGround(kQubitOne).plan) == kQubitOne);
}

TEST_CASE("signature tables must respect the class relations") {
  SignatureTable table;
  table.qubit = 0.01;
  table.stretched_plus = 2.0;
  table.stretched_minus = -2.0;
  table.pair_plus = 1.0;
  table.pair_minus = -1.0;
  CHECK_NOTHROW(table.validate());
  CHECK(table.phaseOf(SignatureClassId::kStretchedPlus) == 2.0);
  CHECK(table.phaseOf(signatureOf(LevelLabel{2, -1}).id) == 1.0);

  SignatureTable lopsided = table;
  lopsided.stretched_minus = -1.5;  // magnitudes differ
  CHECK_THROWS_AS(lopsided.validate(), ValidationError);

  SignatureTable degenerate = table;
  degenerate.pair_plus = degenerate.qubit;  // classes not resolvable
  CHECK_THROWS_AS(degenerate.validate(), ValidationError);
}

TEST_CASE("plan text uses the MEASIG and SEL pseudo-gates") {
  std::mt19937_64 rng(46);
  const auto cls = classify(LevelLabel{1, 1}, rng);
  CHECK(cls.plan.toText() == "MEASIG\nSEL 1,1 -> 2,0\nMEASIG\n");
  const auto ret = returnToGround(LevelLabel{2, -2});
  CHECK(ret.plan.toText() == "SEL 2,-2 -> 1,0\n");
}

TEST_CASE("leakage composes with loss correction to full recovery") {
  std::mt19937_64 rng(47);
  const Complexd c0(0.6), c1(0.8);
  const auto reference = encodePure(LogicalQubit<double>(c0, c1));
  for (const auto& hidden : leakedLevels()) {
    for (int site = 1; site <= 4; ++site) {
      // The leaked atom's qubit content is gone; classification and return
      // leave it in |0>, which is exactly the reinserted-atom situation.
      const auto cls = classify(hidden, rng);
      const auto ret = returnToGround(*cls.leaked_level);
      REQUIRE(simulatePlan(simulatePlan(hidden, cls.plan), ret.plan) ==
              kQubitZero);
      auto rho = reference.density();
      rho = insertFresh(applyLoss(rho, site), site);
      CorrectionOptions options;
      const auto outcome = correctAfterLoss(rho, site, options, rng, &reference);
      CHECK(outcome.recovered_fidelity >= 1.0 - 1e-10);
    }
  }
}

}  // TEST_SUITE
