#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qloss/core.hpp"
#include "qloss/state.hpp"

namespace qloss {

enum class GateKind { kH, kX, kZ, kCnot, kPermute, kCustom };

template <typename Scalar = double>
ComplexMatrix<Scalar> hadamardMatrix() {
  ComplexMatrix<Scalar> m(2, 2);
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  m << s, s, s, -s;
  return m;
}

template <typename Scalar = double>
ComplexMatrix<Scalar> pauliXMatrix() {
  ComplexMatrix<Scalar> m(2, 2);
  m << Complex<Scalar>(0), Complex<Scalar>(1), Complex<Scalar>(1),
      Complex<Scalar>(0);
  return m;
}

template <typename Scalar = double>
ComplexMatrix<Scalar> pauliYMatrix() {
  ComplexMatrix<Scalar> m(2, 2);
  m << Complex<Scalar>(0), Complex<Scalar>(0, -1), Complex<Scalar>(0, 1),
      Complex<Scalar>(0);
  return m;
}

template <typename Scalar = double>
ComplexMatrix<Scalar> pauliZMatrix() {
  ComplexMatrix<Scalar> m(2, 2);
  m << Complex<Scalar>(1), Complex<Scalar>(0), Complex<Scalar>(0),
      Complex<Scalar>(-1);
  return m;
}

/// diag(1, e^{i theta}): relative phase between |0> and |1>.
template <typename Scalar = double>
ComplexMatrix<Scalar> phaseShiftMatrix(Scalar theta) {
  ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(2, 2);
  m(0, 0) = Complex<Scalar>(1);
  m(1, 1) = std::polar(Scalar(1), theta);
  return m;
}

/// CNOT in the |control target> basis with the control most significant.
template <typename Scalar = double>
ComplexMatrix<Scalar> cnotMatrix() {
  ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = Complex<Scalar>(1);
  return m;
}

/// Basis-relabeling unitary for a qubit permutation. images[i] is the new
/// position (1-based) of the qubit currently at position i+1.
template <typename Scalar = double>
ComplexMatrix<Scalar> permutationMatrix(std::span<const int> images) {
  const int n = static_cast<int>(images.size());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int img : images) {
    if (img < 1 || img > n || seen[static_cast<std::size_t>(img - 1)])
      throw ValidationError("images do not form a permutation of 1..n");
    seen[static_cast<std::size_t>(img - 1)] = true;
  }
  const Eigen::Index d = dimension(n);
  ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index j = 0;
    for (int q = 1; q <= n; ++q)
      if (basisBit(i, q, n))
        j |= Eigen::Index{1} << (n - images[static_cast<std::size_t>(q - 1)]);
    m(j, i) = Complex<Scalar>(1);
  }
  return m;
}

/// A labeled unitary acting on named qubit positions. For kPermute the
/// targets are the image list of the permutation and the matrix has full
/// register dimension; otherwise the matrix dimension is 2^#targets with the
/// first target as its most significant qubit.
template <typename Scalar = double>
class Gate {
 public:
  static Gate h(int qubit) {
    return Gate(GateKind::kH, {qubit}, hadamardMatrix<Scalar>(), "H");
  }
  static Gate x(int qubit) {
    return Gate(GateKind::kX, {qubit}, pauliXMatrix<Scalar>(), "X");
  }
  static Gate z(int qubit) {
    return Gate(GateKind::kZ, {qubit}, pauliZMatrix<Scalar>(), "Z");
  }
  static Gate cnot(int control, int target) {
    if (control == target)
      throw ValidationError("CNOT control and target must differ");
    return Gate(GateKind::kCnot, {control, target}, cnotMatrix<Scalar>(),
                "CNOT");
  }
  static Gate permute(std::vector<int> images) {
    ComplexMatrix<Scalar> m = permutationMatrix<Scalar>(images);
    return Gate(GateKind::kPermute, std::move(images), std::move(m), "PERMUTE");
  }
  static Gate custom(ComplexMatrix<Scalar> matrix, std::vector<int> targets,
                     std::string name = "CUSTOM") {
    return Gate(GateKind::kCustom, std::move(targets), std::move(matrix),
                std::move(name));
  }

  GateKind kind() const { return kind_; }
  const std::vector<int>& targets() const { return targets_; }
  const ComplexMatrix<Scalar>& matrix() const { return matrix_; }
  const std::string& name() const { return name_; }

  Gate inverse() const {
    switch (kind_) {
      case GateKind::kH:
      case GateKind::kX:
      case GateKind::kZ:
      case GateKind::kCnot:
        return *this;  // self-inverse
      case GateKind::kPermute: {
        std::vector<int> inv(targets_.size());
        for (std::size_t i = 0; i < targets_.size(); ++i)
          inv[static_cast<std::size_t>(targets_[i] - 1)] =
              static_cast<int>(i) + 1;
        return permute(std::move(inv));
      }
      case GateKind::kCustom:
        return custom(matrix_.adjoint(), targets_, name_);
    }
    throw DomainError("unknown gate kind");
  }

 private:
  Gate(GateKind kind, std::vector<int> targets, ComplexMatrix<Scalar> matrix,
       std::string name)
      : kind_(kind),
        targets_(std::move(targets)),
        matrix_(std::move(matrix)),
        name_(std::move(name)) {
    if (targets_.empty()) throw ValidationError("gate needs a target");
    for (int t : targets_)
      if (t < 1) throw ValidationError("qubit labels are 1-based");
    if (kind_ != GateKind::kPermute) {
      std::vector<int> sorted = targets_;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("gate targets must be distinct");
      if (matrix_.rows() != dimension(static_cast<int>(targets_.size())))
        throw ValidationError("gate matrix dimension does not match targets");
    }
    if (matrix_.rows() != matrix_.cols())
      throw ValidationError("gate matrix must be square");
    const ComplexMatrix<Scalar> gram = matrix_.adjoint() * matrix_;
    const ComplexMatrix<Scalar> id =
        ComplexMatrix<Scalar>::Identity(matrix_.rows(), matrix_.cols());
    if ((gram - id).cwiseAbs().maxCoeff() > Tolerance<Scalar>::algebraic)
      throw ValidationError("gate matrix is not unitary");
  }

  GateKind kind_;
  std::vector<int> targets_;
  ComplexMatrix<Scalar> matrix_;
  std::string name_;
};

/// Expands a k-qubit unitary acting on `targets` (first target most
/// significant) to the full 2^n x 2^n register unitary.
template <typename Scalar>
ComplexMatrix<Scalar> embedOperator(const ComplexMatrix<Scalar>& u,
                                   std::span<const int> targets, int n_qubits) {
  const int k = static_cast<int>(targets.size());
  if (u.rows() != dimension(k))
    throw DomainError("unitary dimension does not match target count");
  for (int t : targets)
    if (t < 1 || t > n_qubits) throw DomainError("gate target out of range");
  const Eigen::Index d = dimension(n_qubits);
  const Eigen::Index gd = dimension(k);
  ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    Eigen::Index gc = 0;
    for (int m = 0; m < k; ++m)
      gc = (gc << 1) | basisBit(col, targets[static_cast<std::size_t>(m)],
                                n_qubits);
    for (Eigen::Index gr = 0; gr < gd; ++gr) {
      Eigen::Index row = col;
      for (int m = 0; m < k; ++m) {
        const int t = targets[static_cast<std::size_t>(m)];
        const Eigen::Index mask = Eigen::Index{1} << (n_qubits - t);
        if ((gr >> (k - 1 - m)) & 1)
          row |= mask;
        else
          row &= ~mask;
      }
      out(row, col) = u(gr, gc);
    }
  }
  return out;
}

/// Full-register unitary of one gate.
template <typename Scalar>
ComplexMatrix<Scalar> gateUnitary(const Gate<Scalar>& g, int n_qubits) {
  if (g.kind() == GateKind::kPermute) {
    if (static_cast<int>(g.targets().size()) != n_qubits)
      throw DomainError("permutation size does not match register");
    return g.matrix();
  }
  return embedOperator(g.matrix(), std::span<const int>(g.targets()), n_qubits);
}

/// rho -> U rho U^dagger. Trace and Hermiticity are preserved and re-checked
/// by the DensityMatrix constructor.
template <typename Scalar>
DensityMatrix<Scalar> applyGate(const DensityMatrix<Scalar>& rho,
                                const Gate<Scalar>& g) {
  const ComplexMatrix<Scalar> u = gateUnitary(g, rho.nQubits());
  return DensityMatrix<Scalar>(rho.nQubits(), u * rho.matrix() * u.adjoint());
}

template <typename Scalar>
PureState<Scalar> applyGate(const PureState<Scalar>& psi,
                            const Gate<Scalar>& g) {
  const ComplexMatrix<Scalar> u = gateUnitary(g, psi.nQubits());
  return PureState<Scalar>(psi.nQubits(), u * psi.amplitudes());
}

/// An ordered gate list. Serializes to one gate per line, name followed by
/// targets: `H 1`, `CNOT 1 3`, `PERMUTE 2 1 4 3`. The parser accepts spaces
/// or commas between targets.
template <typename Scalar = double>
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::vector<Gate<Scalar>> gates) : gates_(std::move(gates)) {}

  Circuit& add(Gate<Scalar> gate) {
    gates_.push_back(std::move(gate));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
  }

  const std::vector<Gate<Scalar>>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  DensityMatrix<Scalar> apply(DensityMatrix<Scalar> rho) const {
    for (const auto& g : gates_) rho = applyGate(rho, g);
    return rho;
  }

  PureState<Scalar> apply(PureState<Scalar> psi) const {
    for (const auto& g : gates_) psi = applyGate(psi, g);
    return psi;
  }

  /// Product of all gate unitaries in application order.
  ComplexMatrix<Scalar> unitary(int n_qubits) const {
    ComplexMatrix<Scalar> u =
        ComplexMatrix<Scalar>::Identity(dimension(n_qubits), dimension(n_qubits));
    for (const auto& g : gates_) u = gateUnitary(g, n_qubits) * u;
    return u;
  }

  Circuit inverse() const {
    std::vector<Gate<Scalar>> inv;
    inv.reserve(gates_.size());
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it)
      inv.push_back(it->inverse());
    return Circuit(std::move(inv));
  }

  std::string toText() const {
    std::string out;
    for (const auto& g : gates_) {
      if (g.kind() == GateKind::kCustom)
        throw ValidationError("custom gates have no text form");
      out += g.name();
      for (int t : g.targets()) {
        out += ' ';
        out += std::to_string(t);
      }
      out += '\n';
    }
    return out;
  }

  static Circuit fromText(const std::string& text) {
    Circuit circuit;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream fields(line);
      std::string name;
      if (!(fields >> name) || name.starts_with('#')) continue;
      std::vector<int> targets;
      int t = 0;
      while (fields >> t) targets.push_back(t);
      if (!fields.eof())
        throw ParseError("bad gate target in line: " + line);
      auto expect = [&](std::size_t count) {
        if (targets.size() != count)
          throw ParseError("wrong target count in line: " + line);
      };
      if (name == "H") {
        expect(1);
        circuit.add(Gate<Scalar>::h(targets[0]));
      } else if (name == "X") {
        expect(1);
        circuit.add(Gate<Scalar>::x(targets[0]));
      } else if (name == "Z") {
        expect(1);
        circuit.add(Gate<Scalar>::z(targets[0]));
      } else if (name == "CNOT") {
        expect(2);
        circuit.add(Gate<Scalar>::cnot(targets[0], targets[1]));
      } else if (name == "PERMUTE") {
        if (targets.empty()) throw ParseError("PERMUTE needs images");
        circuit.add(Gate<Scalar>::permute(std::move(targets)));
      } else {
        throw ParseError("unknown gate: " + name);
      }
    }
    return circuit;
  }

 private:
  std::vector<Gate<Scalar>> gates_;
};

}  // namespace qloss
