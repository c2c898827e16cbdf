#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "qloss/core.hpp"
#include "qloss/gate.hpp"
#include "qloss/state.hpp"

namespace qloss {

/// Logical amplitudes c0, c1 with |c0|^2 + |c1|^2 = 1.
template <typename Scalar = double>
struct LogicalQubit {
  Complex<Scalar> c0;
  Complex<Scalar> c1;

  LogicalQubit(Complex<Scalar> c0_in, Complex<Scalar> c1_in)
      : c0(c0_in), c1(c1_in) {
    const Scalar norm2 = std::norm(c0) + std::norm(c1);
    if (std::abs(norm2 - Scalar(1)) > Tolerance<Scalar>::algebraic)
      throw ValidationError("logical amplitudes are not normalized");
  }
};

/// |0>_L = (|0000> + |1111>)/sqrt(2).
template <typename Scalar = double>
PureState<Scalar> logicalZero() {
  ComplexVector<Scalar> v = ComplexVector<Scalar>::Zero(16);
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  v(0b0000) = Complex<Scalar>(s);
  v(0b1111) = Complex<Scalar>(s);
  return PureState<Scalar>(4, std::move(v));
}

/// |1>_L = (|0011> + |1100>)/sqrt(2).
template <typename Scalar = double>
PureState<Scalar> logicalOne() {
  ComplexVector<Scalar> v = ComplexVector<Scalar>::Zero(16);
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  v(0b0011) = Complex<Scalar>(s);
  v(0b1100) = Complex<Scalar>(s);
  return PureState<Scalar>(4, std::move(v));
}

/// c0 |0>_L + c1 |1>_L over the four physical qubits.
template <typename Scalar = double>
PureState<Scalar> encodePure(const LogicalQubit<Scalar>& lq) {
  ComplexVector<Scalar> v = lq.c0 * logicalZero<Scalar>().amplitudes() +
                            lq.c1 * logicalOne<Scalar>().amplitudes();
  return PureState<Scalar>(4, std::move(v));
}

template <typename Scalar = double>
DensityMatrix<Scalar> encode(const LogicalQubit<Scalar>& lq) {
  return encodePure(lq).density();
}

/// A small code given by its two codewords; they must be orthonormal. Kept as
/// data so the erasure verifier can also run on non-codes (counterexamples).
template <typename Scalar = double>
class CodeSpec {
 public:
  CodeSpec(PureState<Scalar> codeword_0, PureState<Scalar> codeword_1)
      : codeword_0_(std::move(codeword_0)), codeword_1_(std::move(codeword_1)) {
    if (codeword_0_.nQubits() != codeword_1_.nQubits())
      throw ValidationError("codewords must act on the same register");
    if (std::abs(codeword_0_.overlap(codeword_1_)) >
        Tolerance<Scalar>::algebraic)
      throw ValidationError("codewords are not orthogonal");
  }

  static CodeSpec gbp() {
    return CodeSpec(logicalZero<Scalar>(), logicalOne<Scalar>());
  }

  /// {|00>, |11>}: detects but cannot correct an erasure; the standard
  /// negative example for the verifier.
  static CodeSpec repetition() {
    return CodeSpec(PureState<Scalar>::basis(2, 0b00),
                    PureState<Scalar>::basis(2, 0b11));
  }

  int nPhysical() const { return codeword_0_.nQubits(); }
  const PureState<Scalar>& codeword(int logical) const {
    return logical == 0 ? codeword_0_ : codeword_1_;
  }

 private:
  PureState<Scalar> codeword_0_;
  PureState<Scalar> codeword_1_;
};

/// Gram data of the erasure check at one position: lambda(a,b) holds the
/// would-be common factor <i_L| P_a P_b |i_L> for Paulis P in {I,X,Y,Z}.
template <typename Scalar = double>
struct ErasureCheckReport {
  bool correctable = false;
  ComplexMatrix<Scalar> lambda;       // 4x4, averaged diagonal factors
  Scalar max_off_diagonal = 0;        // worst |<0_L| P_a P_b |1_L>|
  Scalar max_diagonal_mismatch = 0;   // worst |lambda^00 - lambda^11|
};

/// Checks the erasure (known-location) correctability conditions at one
/// qubit position: <i_L| E_a^dagger E_b |j_L> = lambda_ab delta_ij for all
/// E_a, E_b in {I, X, Y, Z} acting on that position.
template <typename Scalar = double>
ErasureCheckReport<Scalar> verifyErasureCode(const CodeSpec<Scalar>& code,
                                             int position,
                                             Scalar tol = Scalar(1e-10)) {
  const int n = code.nPhysical();
  if (position < 1 || position > n)
    throw DomainError("erasure position out of range");

  const std::array<ComplexMatrix<Scalar>, 4> paulis = {
      ComplexMatrix<Scalar>::Identity(2, 2), pauliXMatrix<Scalar>(),
      pauliYMatrix<Scalar>(), pauliZMatrix<Scalar>()};
  const std::array<int, 1> targets = {position};

  ErasureCheckReport<Scalar> report;
  report.lambda = ComplexMatrix<Scalar>::Zero(4, 4);
  for (int a = 0; a < 4; ++a) {
    const ComplexMatrix<Scalar> ea = embedOperator<Scalar>(
        paulis[static_cast<std::size_t>(a)], std::span<const int>(targets), n);
    for (int b = 0; b < 4; ++b) {
      const ComplexMatrix<Scalar> eb = embedOperator<Scalar>(
          paulis[static_cast<std::size_t>(b)], std::span<const int>(targets),
          n);
      const ComplexMatrix<Scalar> op = ea.adjoint() * eb;
      auto entry = [&](int i, int j) {
        return (code.codeword(i).amplitudes().adjoint() * op *
                code.codeword(j).amplitudes())(0, 0);
      };
      const Complex<Scalar> m00 = entry(0, 0);
      const Complex<Scalar> m11 = entry(1, 1);
      const Complex<Scalar> m01 = entry(0, 1);
      const Complex<Scalar> m10 = entry(1, 0);
      report.lambda(a, b) = (m00 + m11) / Scalar(2);
      report.max_off_diagonal = std::max(
          {report.max_off_diagonal, std::abs(m01), std::abs(m10)});
      report.max_diagonal_mismatch =
          std::max(report.max_diagonal_mismatch, std::abs(m00 - m11));
    }
  }
  report.correctable =
      report.max_off_diagonal <= tol && report.max_diagonal_mismatch <= tol;
  return report;
}

/// Qubit relabeling that maps loss at `position` to loss at position 1 while
/// fixing both GBP codewords; identity (an empty circuit) for position 1.
/// The pair-swap is re-verified against the codewords at construction.
template <typename Scalar = double>
Circuit<Scalar> lossPermutation(int position) {
  if (position < 1 || position > 4)
    throw DomainError("loss position must be in 1..4");
  if (position == 1) return Circuit<Scalar>{};
  static const std::array<std::vector<int>, 3> images = {
      std::vector<int>{2, 1, 4, 3},   // position 2: swap(1,2) swap(3,4)
      std::vector<int>{3, 4, 1, 2},   // position 3: swap(1,3) swap(2,4)
      std::vector<int>{4, 3, 2, 1}};  // position 4: swap(1,4) swap(2,3)
  Circuit<Scalar> circuit;
  circuit.add(Gate<Scalar>::permute(images[static_cast<std::size_t>(position - 2)]));
  for (int logical = 0; logical < 2; ++logical) {
    const PureState<Scalar> codeword = CodeSpec<Scalar>::gbp().codeword(logical);
    const PureState<Scalar> mapped = circuit.apply(codeword);
    if (std::abs(std::abs(mapped.overlap(codeword)) - Scalar(1)) >
        Tolerance<Scalar>::algebraic)
      throw ValidationError("loss permutation does not preserve the codewords");
  }
  return circuit;
}

}  // namespace qloss
