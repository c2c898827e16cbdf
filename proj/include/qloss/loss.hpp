#pragma once

#include <array>
#include <vector>

#include "qloss/channel.hpp"
#include "qloss/core.hpp"
#include "qloss/gate.hpp"
#include "qloss/state.hpp"

namespace qloss {

/// A site flagged by the QND presence sweep.
struct LossEvent {
  int site = 0;
  bool detected = false;

  friend bool operator==(const LossEvent&, const LossEvent&) = default;
};

enum class SiteStatus { kOccupied, kVacant };

using OccupancyMap = std::vector<SiteStatus>;

/// Qubit loss at `site`: the ejected atom is traced out of the register.
template <typename Scalar>
DensityMatrix<Scalar> applyLoss(const DensityMatrix<Scalar>& rho, int site) {
  return partialTrace(rho, site);
}

/// Inserts a fresh |0> atom so that it occupies position `site` of the grown
/// register, interleaving the basis indices accordingly. The slot must be
/// vacant, which at the density-matrix level means 1 <= site <= n+1; actual
/// occupancy bookkeeping lives with the caller (see qndSweep).
///
/// `depolarization` models the transport fidelity of the conditional source:
/// the inserted atom arrives in (1-eps)|0><0| + eps I/2. The protocol default
/// is a perfect |0>.
template <typename Scalar>
DensityMatrix<Scalar> insertFresh(const DensityMatrix<Scalar>& rho, int site,
                                  Scalar depolarization = Scalar(0),
                                  int max_qubits = kDefaultMaxQubits) {
  const int n = rho.nQubits();
  if (site < 1 || site > n + 1)
    throw ProtocolOrderError("insertion site is not a vacant register slot");
  if (n + 1 > max_qubits)
    throw CapacityError("insertion exceeds the configured qubit cap");
  if (depolarization < Scalar(0) || depolarization > Scalar(1))
    throw ValidationError("depolarization must lie in [0,1]");
  const Eigen::Index lo_bits = n - site + 1;  // labels shifted right of the slot
  const Eigen::Index lo_mask = (Eigen::Index{1} << lo_bits) - 1;
  const Eigen::Index d_new = dimension(n + 1);
  auto grown = [&](Eigen::Index i, Eigen::Index bit) {
    return ((i >> lo_bits) << (lo_bits + 1)) | (bit << lo_bits) |
           (i & lo_mask);
  };
  const Scalar p_one = depolarization / Scalar(2);
  ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Zero(d_new, d_new);
  for (Eigen::Index r = 0; r < rho.dim(); ++r) {
    for (Eigen::Index c = 0; c < rho.dim(); ++c) {
      out(grown(r, 0), grown(c, 0)) = (Scalar(1) - p_one) * rho.matrix()(r, c);
      if (p_one != Scalar(0))
        out(grown(r, 1), grown(c, 1)) = p_one * rho.matrix()(r, c);
    }
  }
  return DensityMatrix<Scalar>(n + 1, std::move(out));
}

/// Loss followed by reinsertion on one site of a joint state. A single-qubit
/// register resets directly to |0><0| (the traced-out register is empty).
template <typename Scalar>
DensityMatrix<Scalar> resetQubit(const DensityMatrix<Scalar>& rho, int site) {
  const int n = rho.nQubits();
  if (n == 1) {
    if (site != 1) throw DomainError("site out of range");
    ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(2, 2);
    m(0, 0) = Complex<Scalar>(1);
    return DensityMatrix<Scalar>(1, std::move(m));
  }
  return insertFresh(applyLoss(rho, site), site);
}

/// The single-qubit loss-then-reinsert channel, i.e. the reset channel.
template <typename Scalar = double>
QubitChannel<Scalar> lossResetChannel() {
  return [](const DensityMatrix<Scalar>& rho) { return resetQubit(rho, 1); };
}

/// Kraus operators {|0><0|, |0><1|} of the reset channel.
template <typename Scalar = double>
std::array<ComplexMatrix<Scalar>, 2> resetKraus() {
  ComplexMatrix<Scalar> k0 = ComplexMatrix<Scalar>::Zero(2, 2);
  k0(0, 0) = Complex<Scalar>(1);
  ComplexMatrix<Scalar> k1 = ComplexMatrix<Scalar>::Zero(2, 2);
  k1(0, 1) = Complex<Scalar>(1);
  return {std::move(k0), std::move(k1)};
}

/// Periodic QND presence sweep: flags every vacant site and touches no qubit
/// state (classical bookkeeping only). The generator argument is reserved
/// for detection-error models; the ideal sweep never draws from it.
template <class Rng>
std::vector<LossEvent> qndSweep(const OccupancyMap& occupancy, Rng&&) {
  std::vector<LossEvent> events;
  for (std::size_t i = 0; i < occupancy.size(); ++i)
    if (occupancy[i] == SiteStatus::kVacant)
      events.push_back(LossEvent{static_cast<int>(i) + 1, true});
  return events;
}

/// The sweep's small deterministic relative phase on the qubit levels,
/// modeled as diag(1, e^{i theta}) on every qubit. The default protocol uses
/// theta = 0; a nonzero angle is compensated by applying the opposite angle.
template <typename Scalar>
DensityMatrix<Scalar> qndPhase(const DensityMatrix<Scalar>& rho, Scalar theta) {
  if (theta == Scalar(0)) return rho;
  DensityMatrix<Scalar> out = rho;
  for (int q = 1; q <= rho.nQubits(); ++q)
    out = applyGate(out, Gate<Scalar>::custom(phaseShiftMatrix<Scalar>(theta),
                                              {q}, "PHASE"));
  return out;
}

}  // namespace qloss
