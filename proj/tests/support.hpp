#pragma once

// Test-only helpers: random states, unitaries and independent mini-oracles.
// Everything here is deliberately written against raw Eigen objects so the
// expected values do not flow through the library code under test.

#include <complex>
#include <random>

#include <Eigen/Dense>

#include <qloss/core.hpp>
#include <qloss/state.hpp>

namespace testsupport {

using Complexd = std::complex<double>;
using Matrix = qloss::ComplexMatrix<double>;
using Vector = qloss::ComplexVector<double>;

inline Vector randomStateVector(int n_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(qloss::dimension(n_qubits));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = Complexd(gauss(rng), gauss(rng));
  v /= v.norm();
  return v;
}

inline qloss::PureState<double> randomPureState(int n_qubits,
                                                std::mt19937_64& rng) {
  return qloss::PureState<double>(n_qubits, randomStateVector(n_qubits, rng));
}

/// Haar-random pair of logical amplitudes (c0, c1).
inline std::pair<Complexd, Complexd> randomAmplitudePair(std::mt19937_64& rng) {
  const Vector v = randomStateVector(1, rng);
  return {v(0), v(1)};
}

/// Random mixed state from the Ginibre ensemble: A A^dagger normalized.
inline qloss::DensityMatrix<double> randomDensityMatrix(int n_qubits,
                                                        std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index d = qloss::dimension(n_qubits);
  Matrix a(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) a(r, c) = Complexd(gauss(rng), gauss(rng));
  Matrix rho = a * a.adjoint();
  rho /= rho.trace();
  // Symmetrize away the last rounding noise.
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return qloss::DensityMatrix<double>(n_qubits, std::move(rho));
}

/// Haar-random unitary via QR of a Ginibre matrix with phase fixing.
inline Matrix randomUnitary(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) a(r, c) = Complexd(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    const Complexd diag = r(i, i);
    q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

/// erf via its Maclaurin series; converges fast for |x| <= 2. Independent of
/// std::erf so it can serve as an oracle for the geometric factor.
inline double erfSeries(double x) {
  const double pi = 3.14159265358979323846;
  double term = x;
  double sum = x;
  for (int n = 1; n < 60; ++n) {
    term *= -x * x / n;
    sum += term / (2 * n + 1);
  }
  return 2.0 / std::sqrt(pi) * sum;
}

}  // namespace testsupport
