#pragma once

#include <array>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qloss/core.hpp"
#include "qloss/gate.hpp"
#include "qloss/state.hpp"

namespace qloss {

/// Choi matrix of a channel in the unnormalized convention
///   J = sum_{i,j} Lambda(|i><j|) (x) |i><j|,
/// with the output system as the most significant factor. The trace equals
/// dim_in and trace-preservation reads Tr_out J = I.
template <typename Scalar = double>
class ChoiMatrix {
 public:
  ChoiMatrix(int dim_in, int dim_out, ComplexMatrix<Scalar> matrix)
      : dim_in_(dim_in), dim_out_(dim_out), matrix_(std::move(matrix)) {
    if (dim_in_ < 2 || dim_out_ < 2)
      throw ValidationError("channel dimensions must be at least 2");
    const Eigen::Index d = Eigen::Index{dim_in_} * dim_out_;
    if (matrix_.rows() != d || matrix_.cols() != d)
      throw ValidationError("Choi matrix must be (dim_in*dim_out)^2");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(
        matrix_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -Tolerance<Scalar>::psd_floor)
      throw ValidationError("Choi matrix is not positive semidefinite");
    const ComplexMatrix<Scalar> in_marginal = traceOutput();
    const ComplexMatrix<Scalar> id =
        ComplexMatrix<Scalar>::Identity(dim_in_, dim_in_);
    if ((in_marginal - id).cwiseAbs().maxCoeff() > Tolerance<Scalar>::psd_floor)
      throw ValidationError("channel is not trace preserving");
  }

  int dimIn() const { return dim_in_; }
  int dimOut() const { return dim_out_; }
  const ComplexMatrix<Scalar>& matrix() const { return matrix_; }

  /// Partial trace over the output system; equals I for a TP channel.
  ComplexMatrix<Scalar> traceOutput() const {
    ComplexMatrix<Scalar> t = ComplexMatrix<Scalar>::Zero(dim_in_, dim_in_);
    for (int o = 0; o < dim_out_; ++o)
      for (int i = 0; i < dim_in_; ++i)
        for (int j = 0; j < dim_in_; ++j)
          t(i, j) += matrix_(Eigen::Index{o} * dim_in_ + i,
                             Eigen::Index{o} * dim_in_ + j);
    return t;
  }

  RealVector<Scalar> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(
        matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }

 private:
  int dim_in_;
  int dim_out_;
  ComplexMatrix<Scalar> matrix_;
};

template <typename Scalar = double>
using QubitChannel =
    std::function<DensityMatrix<Scalar>(const DensityMatrix<Scalar>&)>;

namespace detail {

template <typename Scalar>
DensityMatrix<Scalar> probeState(const ComplexMatrix<Scalar>& m) {
  return DensityMatrix<Scalar>(1, m);
}

}  // namespace detail

/// Builds the Choi matrix of a single-qubit channel by probing it on a state
/// basis and reconstructing its action on |i><j| by linearity, i.e. sending
/// half of a maximally entangled pair through the channel. Linearity is
/// checked numerically on mixtures of the probe states; a nonlinear map (for
/// instance one that renormalizes a lossy process) is rejected.
template <typename Scalar, class Channel>
ChoiMatrix<Scalar> choiMatrix(Channel&& channel) {
  using CM = ComplexMatrix<Scalar>;
  const Complex<Scalar> half(Scalar(0.5));
  const Complex<Scalar> i_unit(Scalar(0), Scalar(1));

  CM p0 = CM::Zero(2, 2);
  p0(0, 0) = Complex<Scalar>(1);
  CM p1 = CM::Zero(2, 2);
  p1(1, 1) = Complex<Scalar>(1);
  CM pplus(2, 2);
  pplus << half, half, half, half;
  CM pplusi(2, 2);
  pplusi << half, -half * i_unit, half * i_unit, half;

  auto image = [&](const CM& probe) -> CM {
    const DensityMatrix<Scalar> out =
        channel(detail::probeState<Scalar>(probe));
    if (out.nQubits() != 1)
      throw ValidationError("channel must map one qubit to one qubit");
    return out.matrix();
  };

  const CM e00 = image(p0);
  const CM e11 = image(p1);
  const CM eplus = image(pplus);
  const CM eplusi = image(pplusi);

  // Linearity probe: Lambda(sum w_k P_k) must equal sum w_k Lambda(P_k).
  const Scalar lin_tol = Scalar(100) * Tolerance<Scalar>::algebraic;
  const CM mix_a = Scalar(0.25) * p0 + Scalar(0.75) * p1;
  if ((image(mix_a) - (Scalar(0.25) * e00 + Scalar(0.75) * e11))
          .cwiseAbs()
          .maxCoeff() > lin_tol)
    throw ValidationError("channel is not linear");
  const CM mix_b = Scalar(0.5) * pplus + Scalar(0.5) * pplusi;
  if ((image(mix_b) - (Scalar(0.5) * eplus + Scalar(0.5) * eplusi))
          .cwiseAbs()
          .maxCoeff() > lin_tol)
    throw ValidationError("channel is not linear");

  // Lambda(|0><1|) from the probe images; Lambda(|1><0|) by Hermiticity
  // preservation.
  const CM e01 =
      eplus + i_unit * eplusi -
      (Complex<Scalar>(Scalar(0.5), Scalar(0.5))) * (e00 + e11);
  const CM e10 = e01.adjoint();

  CM j = CM::Zero(4, 4);
  const std::array<std::array<const CM*, 2>, 2> blocks = {
      {{&e00, &e01}, {&e10, &e11}}};
  for (int i = 0; i < 2; ++i)
    for (int jj = 0; jj < 2; ++jj)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          j(Eigen::Index{a} * 2 + i, Eigen::Index{b} * 2 + jj) =
              (*blocks[static_cast<std::size_t>(i)]
                      [static_cast<std::size_t>(jj)])(a, b);
  return ChoiMatrix<Scalar>(2, 2, std::move(j));
}

/// sum_k K_k rho K_k^dagger with each single-qubit Kraus operator embedded on
/// `target`. The set must be complete: sum_k K_k^dagger K_k = I.
template <typename Scalar>
DensityMatrix<Scalar> applyKraus(const DensityMatrix<Scalar>& rho,
                                 std::span<const ComplexMatrix<Scalar>> kraus,
                                 int target) {
  if (kraus.empty()) throw ValidationError("empty Kraus set");
  ComplexMatrix<Scalar> completeness = ComplexMatrix<Scalar>::Zero(2, 2);
  for (const auto& k : kraus) {
    if (k.rows() != 2 || k.cols() != 2)
      throw ValidationError("Kraus operators must be 2x2");
    completeness += k.adjoint() * k;
  }
  if ((completeness - ComplexMatrix<Scalar>::Identity(2, 2))
          .cwiseAbs()
          .maxCoeff() > Tolerance<Scalar>::algebraic)
    throw ValidationError("Kraus set is not trace preserving");
  const int n = rho.nQubits();
  if (target < 1 || target > n) throw DomainError("target out of range");
  ComplexMatrix<Scalar> out =
      ComplexMatrix<Scalar>::Zero(rho.dim(), rho.dim());
  const std::array<int, 1> targets = {target};
  for (const auto& k : kraus) {
    const ComplexMatrix<Scalar> kk =
        embedOperator<Scalar>(k, std::span<const int>(targets), n);
    out += kk * rho.matrix() * kk.adjoint();
  }
  return DensityMatrix<Scalar>(n, std::move(out));
}

/// Wraps a Kraus set as a single-qubit channel callable.
template <typename Scalar = double>
QubitChannel<Scalar> krausChannel(std::vector<ComplexMatrix<Scalar>> kraus) {
  return [kraus = std::move(kraus)](const DensityMatrix<Scalar>& rho) {
    return applyKraus<Scalar>(rho, kraus, 1);
  };
}

}  // namespace qloss
