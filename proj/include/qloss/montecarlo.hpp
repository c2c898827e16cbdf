#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "qloss/correction.hpp"
#include "qloss/core.hpp"
#include "qloss/gbp_code.hpp"
#include "qloss/leakage.hpp"
#include "qloss/loss.hpp"
#include "qloss/rng.hpp"
#include "qloss/state.hpp"

namespace qloss {

/// One memory experiment: an encoded logical qubit idles for `cycles`
/// abstract time steps with independent per-qubit loss and leakage hazards
/// each step, and a QND sweep every `sweep_period` cycles triggering
/// reinsertion and correction.
struct TrialConfig {
  double p_loss = 0;       // per qubit, per cycle
  double p_leak = 0;       // per qubit, per cycle
  int cycles = 1;
  int sweep_period = 1;    // cycles between QND sweeps
  std::uint64_t seed = 0;
  Complex<double> c0{1, 0};
  Complex<double> c1{0, 0};

  void validate() const {
    if (p_loss < 0 || p_loss > 1 || p_leak < 0 || p_leak > 1)
      throw ValidationError("probabilities must lie in [0,1]");
    if (sweep_period < 1) throw ValidationError("sweep period must be >= 1");
    if (cycles < 0) throw ValidationError("cycle count must be nonnegative");
    LogicalQubit<double> check(c0, c1);  // throws if unnormalized
  }
};

struct TrialResult {
  bool failed = false;
  int n_losses = 0;
  int n_leaks = 0;
  int n_corrections = 0;
  double final_fidelity = 0;
  /// Sites erased (lost or leaked) per completed sweep interval. With ideal
  /// operations, failed holds exactly when some entry has two or more sites.
  std::vector<std::vector<int>> interval_erasures;
};

/// Exact per-interval failure probability of the single-erasure code under
/// independent per-qubit loss p within one sweep interval:
/// 1 - (1-p)^4 - 4 p (1-p)^3, i.e. P(two or more of four qubits erased).
inline double exactIntervalFailureProbability(double p) {
  if (p < 0 || p > 1) throw DomainError("probability outside [0,1]");
  const double q = 1.0 - p;
  return 1.0 - q * q * q * q - 4.0 * p * q * q * q;
}

/// Deterministic given the config: all randomness flows from cfg.seed. A
/// single erasure inside a sweep interval is reinserted and corrected to
/// fidelity 1; two or more erasures in one interval exceed the code distance
/// and mark the trial failed (the sites are refilled without correction). A
/// trailing partial interval is closed by a final sweep.
inline TrialResult runTrial(const TrialConfig& cfg) {
  cfg.validate();
  auto rng = makeRng(cfg.seed);
  const LogicalQubit<double> lq(cfg.c0, cfg.c1);
  const PureState<double> reference = encodePure(lq);
  DensityMatrix<double> rho = reference.density();

  constexpr int n_sites = 4;
  OccupancyMap occupancy(n_sites, SiteStatus::kOccupied);
  std::array<std::optional<LevelLabel>, n_sites> leaked;

  TrialResult result;
  std::bernoulli_distribution lose(cfg.p_loss);
  std::bernoulli_distribution leak(cfg.p_leak);
  std::uniform_int_distribution<std::size_t> pick_level(0, 5);

  auto sweep = [&]() {
    const std::vector<LossEvent> events = qndSweep(occupancy, rng);
    std::vector<int> erased;
    for (const LossEvent& e : events) erased.push_back(e.site);
    for (int s = 1; s <= n_sites; ++s)
      if (leaked[static_cast<std::size_t>(s - 1)] &&
          occupancy[static_cast<std::size_t>(s - 1)] == SiteStatus::kOccupied)
        erased.push_back(s);
    std::sort(erased.begin(), erased.end());
    result.interval_erasures.push_back(erased);

    if (erased.size() >= 2) {
      // Beyond the single-erasure capability: refill without correction.
      result.failed = true;
      for (int s : erased) rho = resetQubit(rho, s);
    } else if (erased.size() == 1) {
      const int s = erased.front();
      if (const auto& hidden = leaked[static_cast<std::size_t>(s - 1)]) {
        const ClassifyResult cls = classify(*hidden, rng);
        const ReturnPlan ret = returnToGround(*cls.leaked_level);
        if (simulatePlan(simulatePlan(*hidden, cls.plan), ret.plan) !=
            kQubitZero)
          throw Error("leakage protocol did not end in the qubit ground state");
      }
      rho = resetQubit(rho, s);
      CorrectionOptions options;
      const CorrectionOutcome<double> outcome =
          correctAfterLoss(rho, s, options, rng, &reference);
      rho = outcome.output;
      ++result.n_corrections;
    }
    occupancy.assign(n_sites, SiteStatus::kOccupied);
    leaked.fill(std::nullopt);
    return !result.failed;
  };

  bool swept_after_last_event = true;
  for (int cycle = 1; cycle <= cfg.cycles; ++cycle) {
    for (int s = 1; s <= n_sites; ++s) {
      const auto idx = static_cast<std::size_t>(s - 1);
      if (occupancy[idx] == SiteStatus::kVacant) continue;
      if (lose(rng)) {
        occupancy[idx] = SiteStatus::kVacant;
        leaked[idx].reset();  // a leaked atom can still be ejected
        ++result.n_losses;
        swept_after_last_event = false;
      } else if (!leaked[idx] && leak(rng)) {
        leaked[idx] = leakedLevels()[pick_level(rng)];
        ++result.n_leaks;
        swept_after_last_event = false;
      }
    }
    if (cycle % cfg.sweep_period == 0) {
      const bool ok = sweep();
      swept_after_last_event = true;
      if (!ok) break;
    }
  }
  if (!result.failed && !swept_after_last_event) sweep();

  result.final_fidelity = fidelity(rho, reference);
  return result;
}

struct FailureEstimate {
  double p_fail_hat = 0;
  double standard_error = 0;
  long n_trials = 0;
  long n_failures = 0;
};

/// Monte Carlo failure-rate estimate with binomial standard error. Trial t
/// runs with seed trialSeed(cfg.seed, t), so the estimate is reproducible
/// and order-independent.
inline FailureEstimate estimateFailure(const TrialConfig& cfg, long n_trials) {
  if (n_trials < 1) throw DomainError("need at least one trial");
  cfg.validate();
  long failures = 0;
  for (long t = 0; t < n_trials; ++t) {
    TrialConfig trial_cfg = cfg;
    trial_cfg.seed = trialSeed(cfg.seed, static_cast<std::uint64_t>(t));
    if (runTrial(trial_cfg).failed) ++failures;
  }
  FailureEstimate estimate;
  estimate.n_trials = n_trials;
  estimate.n_failures = failures;
  estimate.p_fail_hat =
      static_cast<double>(failures) / static_cast<double>(n_trials);
  estimate.standard_error =
      std::sqrt(estimate.p_fail_hat * (1.0 - estimate.p_fail_hat) /
                static_cast<double>(n_trials));
  return estimate;
}

}  // namespace qloss
