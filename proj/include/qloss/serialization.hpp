#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "qloss/core.hpp"
#include "qloss/state.hpp"

namespace qloss {

/// Fixture document for a density matrix:
///   { "n_qubits": n, "matrix": [[re, im], ...] }
/// with the matrix flattened row-major, one [re, im] pair per entry.
template <typename Scalar = double>
nlohmann::json toJson(const DensityMatrix<Scalar>& rho) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index r = 0; r < rho.dim(); ++r) {
    for (Eigen::Index c = 0; c < rho.dim(); ++c) {
      const Complex<Scalar> v = rho.matrix()(r, c);
      entries.push_back({static_cast<double>(v.real()),
                         static_cast<double>(v.imag())});
    }
  }
  return nlohmann::json{{"n_qubits", rho.nQubits()}, {"matrix", entries}};
}

/// Parses and fully validates a fixture document (including the PSD floor).
template <typename Scalar = double>
DensityMatrix<Scalar> densityFromJson(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("n_qubits") || !doc.contains("matrix"))
    throw ParseError("fixture must have n_qubits and matrix fields");
  if (!doc["n_qubits"].is_number_integer())
    throw ParseError("n_qubits must be an integer");
  const int n = doc["n_qubits"].get<int>();
  if (n < 1 || n > 30) throw ParseError("n_qubits out of range");
  const Eigen::Index d = dimension(n);
  const auto& entries = doc["matrix"];
  if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != d * d)
    throw ParseError("matrix must hold 4^n_qubits [re, im] pairs");
  ComplexMatrix<Scalar> m(d, d);
  Eigen::Index flat = 0;
  for (const auto& pair : entries) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number())
      throw ParseError("matrix entries must be [re, im] pairs");
    m(flat / d, flat % d) = Complex<Scalar>(
        static_cast<Scalar>(pair[0].get<double>()),
        static_cast<Scalar>(pair[1].get<double>()));
    ++flat;
  }
  return DensityMatrix<Scalar>::fromMatrix(std::move(m));
}

template <typename Scalar = double>
DensityMatrix<Scalar> densityFromJsonText(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return densityFromJson<Scalar>(doc);
}

}  // namespace qloss
