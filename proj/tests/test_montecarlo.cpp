#include <doctest.h>

#include <cmath>
#include <random>

#include <qloss/montecarlo.hpp>

#include "support.hpp"

using namespace qloss;
using testsupport::Complexd;

TEST_SUITE("montecarlo") {

TEST_CASE("config validation") {
  TrialConfig cfg;
  cfg.p_loss = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = TrialConfig{};
  cfg.sweep_period = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = TrialConfig{};
  cfg.c0 = Complexd(1);
  cfg.c1 = Complexd(1);
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("no noise means perfect storage") {
  TrialConfig cfg;
  cfg.cycles = 50;
  cfg.c0 = Complexd(0.6);
  cfg.c1 = Complexd(0.8);
  const auto result = runTrial(cfg);
  CHECK_FALSE(result.failed);
  CHECK(result.n_losses == 0);
  CHECK(result.n_leaks == 0);
  CHECK(result.final_fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trials are deterministic in the seed") {
  TrialConfig cfg;
  cfg.p_loss = 0.05;
  cfg.p_leak = 0.02;
  cfg.cycles = 40;
  cfg.sweep_period = 2;
  cfg.seed = 1234;
  cfg.c0 = Complexd(0.6);
  cfg.c1 = Complexd(0.8);
  const auto a = runTrial(cfg);
  const auto b = runTrial(cfg);
  CHECK(a.failed == b.failed);
  CHECK(a.n_losses == b.n_losses);
  CHECK(a.n_leaks == b.n_leaks);
  CHECK(a.n_corrections == b.n_corrections);
  CHECK(a.final_fidelity == b.final_fidelity);
  CHECK(a.interval_erasures == b.interval_erasures);
}

TEST_CASE("single losses are corrected to fidelity one") {
  // Hunt for seeds whose trials contain only isolated losses and check they
  // all recover exactly.
  int found = 0;
  for (std::uint64_t seed = 0; seed < 400 && found < 10; ++seed) {
    TrialConfig cfg;
    cfg.p_loss = 0.05;
    cfg.cycles = 10;
    cfg.seed = seed;
    cfg.c0 = Complexd(0.6);
    cfg.c1 = Complexd(0.8);
    const auto result = runTrial(cfg);
    if (result.failed || result.n_losses == 0) continue;
    ++found;
    CHECK(result.n_corrections == result.n_losses);
    CHECK(result.final_fidelity >= 1.0 - 1e-10);
  }
  CHECK(found == 10);
}

TEST_CASE("failure flag matches the interval event log") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    TrialConfig cfg;
    cfg.p_loss = 0.12;
    cfg.p_leak = 0.05;
    cfg.cycles = 12;
    cfg.sweep_period = 3;
    cfg.seed = seed;
    const auto result = runTrial(cfg);
    bool expects_failure = false;
    for (const auto& interval : result.interval_erasures)
      if (interval.size() >= 2) expects_failure = true;
    CHECK(result.failed == expects_failure);
    if (result.failed) {
      // The trial stops at the first unrecoverable interval.
      CHECK(result.interval_erasures.back().size() >= 2);
    } else if (result.n_losses + result.n_leaks > 0) {
      CHECK(result.final_fidelity >= 1.0 - 1e-10);
    }
  }
}

TEST_CASE("two losses in one interval are unrecoverable") {
  // With p_loss = 1 every site is lost in the first cycle.
  TrialConfig cfg;
  cfg.p_loss = 1.0;
  cfg.cycles = 1;
  const auto result = runTrial(cfg);
  CHECK(result.failed);
  CHECK(result.n_losses == 4);
  CHECK(result.n_corrections == 0);
}

TEST_CASE("leaks route through classification and correction") {
  TrialConfig cfg;
  cfg.p_leak = 0.6;
  cfg.cycles = 1;
  cfg.c0 = Complexd(0.6);
  cfg.c1 = Complexd(0.8);
  int leak_trials = 0;
  for (std::uint64_t seed = 0; seed < 200 && leak_trials < 10; ++seed) {
    cfg.seed = seed;
    const auto result = runTrial(cfg);
    if (result.failed || result.n_leaks != 1) continue;
    ++leak_trials;
    CHECK(result.n_corrections == 1);
    CHECK(result.final_fidelity >= 1.0 - 1e-10);
  }
  CHECK(leak_trials == 10);
}

TEST_CASE("a trailing partial interval is swept before the trial ends") {
  // sweep_period longer than the trial: the closing sweep must still correct.
  int exercised = 0;
  for (std::uint64_t seed = 0; seed < 300 && exercised < 5; ++seed) {
    TrialConfig cfg;
    cfg.p_loss = 0.1;
    cfg.cycles = 3;
    cfg.sweep_period = 10;
    cfg.seed = seed;
    cfg.c0 = Complexd(0.6);
    cfg.c1 = Complexd(0.8);
    const auto result = runTrial(cfg);
    if (result.n_losses != 1 || result.failed) continue;
    ++exercised;
    CHECK(result.n_corrections == 1);
    CHECK(result.final_fidelity >= 1.0 - 1e-10);
    CHECK(result.interval_erasures.size() == 1);
  }
  CHECK(exercised == 5);
}

TEST_CASE("interval failure probability formula and its small-p expansion") {
  // Exact binomial: 1 - (1-p)^4 - 4p(1-p)^3, which expands to
  // p^2 (6 - 8p + 3p^2); the ratio to p^2 approaches 6 from below.
  for (double p : {1e-4, 1e-3, 1e-2, 0.05}) {
    const double exact = exactIntervalFailureProbability(p);
    const double series = p * p * (6.0 - 8.0 * p + 3.0 * p * p);
    CHECK(exact == doctest::Approx(series).epsilon(1e-9));
  }
  CHECK(exactIntervalFailureProbability(1e-6) / 1e-12 ==
        doctest::Approx(6.0).epsilon(1e-4));
  CHECK_THROWS_AS(exactIntervalFailureProbability(-0.1), DomainError);
}

TEST_CASE("estimates are reproducible and track the exact rate") {
  TrialConfig cfg;
  cfg.p_loss = 0.05;
  cfg.cycles = 1;
  cfg.sweep_period = 1;
  cfg.seed = 99;
  const auto a = estimateFailure(cfg, 4000);
  const auto b = estimateFailure(cfg, 4000);
  CHECK(a.p_fail_hat == b.p_fail_hat);
  CHECK(a.n_failures == b.n_failures);

  for (double p : {0.001, 0.01, 0.05}) {
    cfg.p_loss = p;
    const long n = 4000;
    const double exact = exactIntervalFailureProbability(p);
    const double sigma = std::sqrt(exact * (1 - exact) / n);
    CHECK(std::abs(estimateFailure(cfg, n).p_fail_hat - exact) < 3 * sigma);
  }

  TrialConfig quiet;
  quiet.p_loss = 0.0;
  CHECK(estimateFailure(quiet, 100).p_fail_hat == 0.0);
  CHECK_THROWS_AS(estimateFailure(quiet, 0), DomainError);
}

TEST_CASE("trial seeds split deterministically from the master seed") {
  CHECK(trialSeed(7, 0) == trialSeed(7, 0));
  CHECK(trialSeed(7, 0) != trialSeed(7, 1));
  CHECK(trialSeed(7, 0) != trialSeed(8, 0));
}

}  // TEST_SUITE
