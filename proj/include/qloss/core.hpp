#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace qloss {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using ComplexVector = Eigen::Vector<std::complex<Scalar>, Eigen::Dynamic>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVector = Eigen::Vector<Scalar, Eigen::Dynamic>;

/// Cap on register growth for tensor/insert operations unless the caller
/// raises it explicitly. Dense 2^n x 2^n storage gets out of hand quickly.
inline constexpr int kDefaultMaxQubits = 12;

/// Numeric tolerances used by state, gate and channel validation. The double
/// instantiation pins the contract values; other scalars scale with epsilon.
template <typename Scalar>
struct Tolerance {
  static constexpr Scalar algebraic =
      Scalar(4.5e3) * std::numeric_limits<Scalar>::epsilon();
  static constexpr Scalar psd_floor =
      Scalar(4.5e5) * std::numeric_limits<Scalar>::epsilon();
};

template <>
struct Tolerance<double> {
  static constexpr double algebraic = 1e-12;  // norms, traces, Hermiticity, unitarity
  static constexpr double psd_floor = 1e-10;  // eigenvalue floor for PSD checks
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a structural invariant (normalization, Hermiticity,
/// unitarity, probability bookkeeping, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An operation would grow the register past the configured qubit cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the operation's domain (bad index, wrong size).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A forced measurement outcome has probability zero.
class ImpossibleOutcomeError : public Error {
 public:
  using Error::Error;
};

/// A register operation was issued out of protocol order (e.g. inserting an
/// atom into a slot that is not vacant).
class ProtocolOrderError : public Error {
 public:
  using Error::Error;
};

/// A formula was evaluated at a singular parameter value (e.g. resonance).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A text or JSON document does not match the expected format.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Dimension of an n-qubit Hilbert space.
inline Eigen::Index dimension(int n_qubits) {
  return Eigen::Index{1} << n_qubits;
}

/// Number of qubits for a dimension that must be an exact power of two.
inline int qubitCount(Eigen::Index dim) {
  if (dim < 2) throw DomainError("dimension must be at least 2");
  int n = 0;
  Eigen::Index d = dim;
  while (d > 1) {
    if (d & 1) throw DomainError("dimension is not a power of two");
    d >>= 1;
    ++n;
  }
  return n;
}

/// Qubit labels are 1-based and qubit 1 is the leftmost ket label, i.e. the
/// most significant bit of a basis index: |0111> on four qubits is index 7.
inline int basisBit(Eigen::Index index, int qubit, int n_qubits) {
  return static_cast<int>((index >> (n_qubits - qubit)) & 1);
}

}  // namespace qloss
