#pragma once

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "qloss/core.hpp"

namespace qloss {

template <typename Scalar>
class DensityMatrix;

/// An n-qubit pure state: 2^n complex amplitudes, normalized to 1 within
/// Tolerance::algebraic. Value-semantic and immutable after construction.
template <typename Scalar = double>
class PureState {
 public:
  PureState(int n_qubits, ComplexVector<Scalar> amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits_ < 1 || n_qubits_ > 30)
      throw DomainError("qubit count must be in 1..30");
    if (amplitudes_.size() != dimension(n_qubits_))
      throw ValidationError("amplitude vector length must equal 2^n_qubits");
    const Scalar norm2 = amplitudes_.squaredNorm();
    if (std::abs(norm2 - Scalar(1)) > Tolerance<Scalar>::algebraic)
      throw ValidationError("pure state is not normalized");
  }

  /// Computational basis state |index> of n qubits.
  static PureState basis(int n_qubits, Eigen::Index index) {
    if (n_qubits < 1 || n_qubits > 30)
      throw DomainError("qubit count must be in 1..30");
    if (index < 0 || index >= dimension(n_qubits))
      throw DomainError("basis index out of range");
    ComplexVector<Scalar> v = ComplexVector<Scalar>::Zero(dimension(n_qubits));
    v(index) = Complex<Scalar>(1);
    return PureState(n_qubits, std::move(v));
  }

  static PureState zero(int n_qubits) { return basis(n_qubits, 0); }

  int nQubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const ComplexVector<Scalar>& amplitudes() const { return amplitudes_; }
  Complex<Scalar> amplitude(Eigen::Index i) const { return amplitudes_(i); }

  /// <this|other>.
  Complex<Scalar> overlap(const PureState& other) const {
    if (other.dim() != dim()) throw DomainError("dimension mismatch");
    return amplitudes_.dot(other.amplitudes_);
  }

  DensityMatrix<Scalar> density() const;

 private:
  int n_qubits_;
  ComplexVector<Scalar> amplitudes_;
};

/// An n-qubit mixed state: a 2^n x 2^n complex matrix that is Hermitian with
/// unit trace (checked on construction) and positive semidefinite down to
/// -Tolerance::psd_floor. The PSD check runs eagerly up to 6 qubits; above
/// that (where the eigensolve dominates everything else) call validate().
template <typename Scalar = double>
class DensityMatrix {
 public:
  DensityMatrix(int n_qubits, ComplexMatrix<Scalar> matrix)
      : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
    if (n_qubits_ < 1 || n_qubits_ > 30)
      throw DomainError("qubit count must be in 1..30");
    const Eigen::Index d = dimension(n_qubits_);
    if (matrix_.rows() != d || matrix_.cols() != d)
      throw ValidationError("density matrix must be 2^n x 2^n");
    const Scalar tol = Tolerance<Scalar>::algebraic;
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw ValidationError("density matrix is not Hermitian");
    if (std::abs(matrix_.trace() - Complex<Scalar>(1)) > tol)
      throw ValidationError("density matrix trace is not 1");
    if (d <= 64 && !isPositiveSemidefinite())
      throw ValidationError("density matrix has a negative eigenvalue");
  }

  /// Builds from a raw matrix, inferring the qubit count and running the full
  /// validation including the PSD eigenvalue floor at any size.
  static DensityMatrix fromMatrix(ComplexMatrix<Scalar> matrix) {
    if (matrix.rows() != matrix.cols())
      throw ValidationError("density matrix must be square");
    const int n = qubitCount(matrix.rows());
    DensityMatrix rho(n, std::move(matrix));
    rho.validate();
    return rho;
  }

  static DensityMatrix pure(const PureState<Scalar>& psi) {
    return DensityMatrix(psi.nQubits(),
                         psi.amplitudes() * psi.amplitudes().adjoint());
  }

  int nQubits() const { return n_qubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix<Scalar>& matrix() const { return matrix_; }

  RealVector<Scalar> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(
        matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }

  bool isPositiveSemidefinite(Scalar floor = Tolerance<Scalar>::psd_floor) const {
    return eigenvalues().minCoeff() >= -floor;
  }

  /// Full invariant check (Hermiticity, unit trace, PSD floor); throws
  /// ValidationError on the first violation.
  void validate(Scalar algebraic_tol = Tolerance<Scalar>::algebraic,
                Scalar psd_floor = Tolerance<Scalar>::psd_floor) const {
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > algebraic_tol)
      throw ValidationError("density matrix is not Hermitian");
    if (std::abs(matrix_.trace() - Complex<Scalar>(1)) > algebraic_tol)
      throw ValidationError("density matrix trace is not 1");
    if (!isPositiveSemidefinite(psd_floor))
      throw ValidationError("density matrix has a negative eigenvalue");
  }

 private:
  int n_qubits_;
  ComplexMatrix<Scalar> matrix_;
};

template <typename Scalar>
DensityMatrix<Scalar> PureState<Scalar>::density() const {
  return DensityMatrix<Scalar>::pure(*this);
}

/// A mixed state written as weighted pure-state branches {(phi_k, p_k)}.
/// Probabilities must lie in [0,1] and sum to 1 within tolerance.
template <typename Scalar = double>
class Ensemble {
 public:
  using Branch = std::pair<PureState<Scalar>, Scalar>;

  explicit Ensemble(std::vector<Branch> branches)
      : branches_(std::move(branches)) {
    if (branches_.empty()) throw ValidationError("ensemble has no branches");
    const int n = branches_.front().first.nQubits();
    Scalar total(0);
    for (const auto& [state, p] : branches_) {
      if (state.nQubits() != n)
        throw ValidationError("ensemble branches have mixed qubit counts");
      if (p < Scalar(0) || p > Scalar(1))
        throw ValidationError("branch probability outside [0,1]");
      total += p;
    }
    if (std::abs(total - Scalar(1)) > Tolerance<Scalar>::algebraic)
      throw ValidationError("branch probabilities do not sum to 1");
  }

  const std::vector<Branch>& branches() const { return branches_; }
  int nQubits() const { return branches_.front().first.nQubits(); }

  DensityMatrix<Scalar> densify() const {
    const Eigen::Index d = branches_.front().first.dim();
    ComplexMatrix<Scalar> rho = ComplexMatrix<Scalar>::Zero(d, d);
    for (const auto& [state, p] : branches_)
      rho += p * (state.amplitudes() * state.amplitudes().adjoint());
    return DensityMatrix<Scalar>(nQubits(), std::move(rho));
  }

 private:
  std::vector<Branch> branches_;
};

/// Kronecker product with qubit 1 of `a` as the leftmost (most significant)
/// label of the result, matching the |b1 b2 ... bn> ket convention.
template <typename Scalar>
PureState<Scalar> tensor(const PureState<Scalar>& a, const PureState<Scalar>& b,
                         int max_qubits = kDefaultMaxQubits) {
  const int n = a.nQubits() + b.nQubits();
  if (n > max_qubits)
    throw CapacityError("tensor product exceeds the configured qubit cap");
  ComplexVector<Scalar> v =
      Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes());
  return PureState<Scalar>(n, std::move(v));
}

template <typename Scalar>
DensityMatrix<Scalar> tensor(const DensityMatrix<Scalar>& a,
                             const DensityMatrix<Scalar>& b,
                             int max_qubits = kDefaultMaxQubits) {
  const int n = a.nQubits() + b.nQubits();
  if (n > max_qubits)
    throw CapacityError("tensor product exceeds the configured qubit cap");
  ComplexMatrix<Scalar> m = Eigen::kroneckerProduct(a.matrix(), b.matrix());
  return DensityMatrix<Scalar>(n, std::move(m));
}

/// Traces out one qubit; the result keeps the remaining labels in order.
template <typename Scalar>
DensityMatrix<Scalar> partialTrace(const DensityMatrix<Scalar>& rho, int qubit) {
  const int n = rho.nQubits();
  if (n < 2)
    throw DomainError("partial trace requires at least two qubits");
  if (qubit < 1 || qubit > n) throw DomainError("qubit index out of range");
  const Eigen::Index keep_dim = dimension(n - 1);
  const Eigen::Index lo = Eigen::Index{1} << (n - qubit);  // block below the traced bit
  const auto& m = rho.matrix();
  ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Zero(keep_dim, keep_dim);
  for (Eigen::Index r = 0; r < keep_dim; ++r) {
    const Eigen::Index r0 = (r / lo) * 2 * lo + (r % lo);
    for (Eigen::Index c = 0; c < keep_dim; ++c) {
      const Eigen::Index c0 = (c / lo) * 2 * lo + (c % lo);
      out(r, c) = m(r0, c0) + m(r0 + lo, c0 + lo);
    }
  }
  return DensityMatrix<Scalar>(n - 1, std::move(out));
}

/// <psi| rho |psi>, real in [0,1] up to numerical noise.
template <typename Scalar>
Scalar fidelity(const DensityMatrix<Scalar>& rho, const PureState<Scalar>& psi) {
  if (rho.dim() != psi.dim()) throw DomainError("dimension mismatch");
  const Complex<Scalar> value =
      (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0, 0);
  return value.real();
}

template <typename Scalar>
struct MeasurementResult {
  int bit;
  Scalar probability;
  DensityMatrix<Scalar> post;
};

namespace detail {

template <typename Scalar>
Scalar bitProbability(const DensityMatrix<Scalar>& rho, int qubit, int bit) {
  const int n = rho.nQubits();
  Scalar p(0);
  for (Eigen::Index i = 0; i < rho.dim(); ++i)
    if (basisBit(i, qubit, n) == bit) p += rho.matrix()(i, i).real();
  return p;
}

template <typename Scalar>
MeasurementResult<Scalar> collapse(const DensityMatrix<Scalar>& rho, int qubit,
                                   int bit, Scalar probability) {
  const int n = rho.nQubits();
  ComplexMatrix<Scalar> m = rho.matrix();
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    if (basisBit(i, qubit, n) != bit) {
      m.row(i).setZero();
      m.col(i).setZero();
    }
  }
  m /= probability;
  return MeasurementResult<Scalar>{bit, probability,
                                   DensityMatrix<Scalar>(n, std::move(m))};
}

}  // namespace detail

/// Z-basis projective measurement of one qubit with a forced outcome; the
/// collapsed state is renormalized. Forcing an outcome whose probability is
/// below tolerance throws ImpossibleOutcomeError.
template <typename Scalar>
MeasurementResult<Scalar> measureQubit(const DensityMatrix<Scalar>& rho,
                                       int qubit, int forced_bit) {
  const int n = rho.nQubits();
  if (qubit < 1 || qubit > n) throw DomainError("qubit index out of range");
  if (forced_bit != 0 && forced_bit != 1)
    throw DomainError("measurement outcome must be 0 or 1");
  const Scalar p = detail::bitProbability(rho, qubit, forced_bit);
  if (p <= Tolerance<Scalar>::algebraic)
    throw ImpossibleOutcomeError("forced outcome has zero probability");
  return detail::collapse(rho, qubit, forced_bit, p);
}

/// Z-basis projective measurement with the outcome sampled from the caller's
/// generator, so all randomness is explicitly seeded.
template <typename Scalar, class Rng>
  requires std::uniform_random_bit_generator<std::remove_reference_t<Rng>>
MeasurementResult<Scalar> measureQubit(const DensityMatrix<Scalar>& rho,
                                       int qubit, Rng&& rng) {
  const int n = rho.nQubits();
  if (qubit < 1 || qubit > n) throw DomainError("qubit index out of range");
  const Scalar p0 = detail::bitProbability(rho, qubit, 0);
  std::uniform_real_distribution<Scalar> uniform(Scalar(0), Scalar(1));
  const int bit = uniform(rng) < p0 ? 0 : 1;
  const Scalar p = bit == 0 ? p0 : Scalar(1) - p0;
  return detail::collapse(rho, qubit, bit, p);
}

}  // namespace qloss
