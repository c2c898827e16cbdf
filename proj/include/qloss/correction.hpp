#pragma once

#include <optional>
#include <utility>

#include "qloss/core.hpp"
#include "qloss/gate.hpp"
#include "qloss/gbp_code.hpp"
#include "qloss/loss.hpp"
#include "qloss/state.hpp"

namespace qloss {

/// How the purifying measurement on qubit 2 is realized. Both modes leave
/// the register in the same collapsed state for the same outcome.
enum class MeasurementMode { kProjective, kDestructiveReplace };

template <typename Scalar = double>
struct CorrectionOutcome {
  int measured_bit = 0;
  Circuit<Scalar> circuit_applied;
  DensityMatrix<Scalar> output;
  Scalar recovered_fidelity = 0;
};

struct CorrectionOptions {
  MeasurementMode mode = MeasurementMode::kProjective;
  /// When set, the measurement branch is selected deterministically instead
  /// of sampled, so tests can enumerate both branches.
  std::optional<int> forced_bit;
};

/// The static recovery sequence for a measured branch: H on qubit 1, CNOTs
/// from qubit 1 onto qubits 2..4, then X on qubit 1 for the bit-1 branch.
template <typename Scalar = double>
Circuit<Scalar> correctionCircuit(int measured_bit) {
  if (measured_bit != 0 && measured_bit != 1)
    throw DomainError("measured bit must be 0 or 1");
  Circuit<Scalar> circuit;
  circuit.add(Gate<Scalar>::h(1));
  circuit.add(Gate<Scalar>::cnot(1, 2));
  circuit.add(Gate<Scalar>::cnot(1, 3));
  circuit.add(Gate<Scalar>::cnot(1, 4));
  if (measured_bit == 1) circuit.add(Gate<Scalar>::x(1));
  return circuit;
}

/// Destructive-measurement alternative: measure the qubit, remove the atom,
/// reinsert |0>, and flip conditioned on the outcome. The final state equals
/// the projective collapse exactly.
template <typename Scalar>
std::pair<int, DensityMatrix<Scalar>> destructiveMeasureReplace(
    const DensityMatrix<Scalar>& rho, int qubit, int forced_bit) {
  const MeasurementResult<Scalar> m = measureQubit(rho, qubit, forced_bit);
  DensityMatrix<Scalar> replaced = resetQubit(m.post, qubit);
  if (m.bit == 1) replaced = applyGate(replaced, Gate<Scalar>::x(qubit));
  return {m.bit, std::move(replaced)};
}

template <typename Scalar, class Rng>
  requires std::uniform_random_bit_generator<std::remove_reference_t<Rng>>
std::pair<int, DensityMatrix<Scalar>> destructiveMeasureReplace(
    const DensityMatrix<Scalar>& rho, int qubit, Rng&& rng) {
  const MeasurementResult<Scalar> m = measureQubit(rho, qubit, rng);
  DensityMatrix<Scalar> replaced = resetQubit(m.post, qubit);
  if (m.bit == 1) replaced = applyGate(replaced, Gate<Scalar>::x(qubit));
  return {m.bit, std::move(replaced)};
}

/// Runs the full recovery on the post-reinsertion state rho_e: relabel the
/// lost site to position 1, purify by measuring qubit 2, apply the branch
/// circuit, and undo the relabeling. For an ideal rho_e the output equals
/// the originally encoded state with fidelity 1.
///
/// recovered_fidelity is taken against `reference` when given; otherwise it
/// is the overlap with the code space, which certifies return to the code
/// but not the logical amplitudes.
template <typename Scalar, class Rng>
  requires std::uniform_random_bit_generator<std::remove_reference_t<Rng>>
CorrectionOutcome<Scalar> correctAfterLoss(
    const DensityMatrix<Scalar>& rho_e, int lost_site,
    const CorrectionOptions& options, Rng&& rng,
    const PureState<Scalar>* reference = nullptr) {
  if (rho_e.nQubits() != 4)
    throw DomainError("recovery expects the 4-qubit post-reinsertion state");
  if (lost_site < 1 || lost_site > 4)
    throw DomainError("lost site must be in 1..4");
  rho_e.validate();

  const Circuit<Scalar> relabel = lossPermutation<Scalar>(lost_site);
  DensityMatrix<Scalar> rho = relabel.apply(rho_e);

  int bit = 0;
  if (options.mode == MeasurementMode::kProjective) {
    const MeasurementResult<Scalar> m =
        options.forced_bit ? measureQubit(rho, 2, *options.forced_bit)
                           : measureQubit(rho, 2, rng);
    bit = m.bit;
    rho = m.post;
  } else {
    auto [b, state] = options.forced_bit
                          ? destructiveMeasureReplace(rho, 2, *options.forced_bit)
                          : destructiveMeasureReplace(rho, 2, rng);
    bit = b;
    rho = std::move(state);
  }

  const Circuit<Scalar> branch = correctionCircuit<Scalar>(bit);
  rho = branch.apply(rho);
  const Circuit<Scalar> restore = relabel.inverse();
  rho = restore.apply(rho);

  Circuit<Scalar> applied = relabel;
  applied.append(branch);
  applied.append(restore);

  Scalar recovered;
  if (reference != nullptr) {
    recovered = fidelity(rho, *reference);
  } else {
    recovered = fidelity(rho, logicalZero<Scalar>()) +
                fidelity(rho, logicalOne<Scalar>());
  }
  return CorrectionOutcome<Scalar>{bit, std::move(applied), std::move(rho),
                                   recovered};
}

}  // namespace qloss
