#include <doctest.h>

#include <cmath>
#include <random>

#include <qloss/gbp_code.hpp>

#include "support.hpp"

using namespace qloss;
using testsupport::Complexd;

TEST_SUITE("gbp_code") {

TEST_CASE("codeword amplitudes") {
  const auto zero = logicalZero<double>();
  const auto one = logicalOne<double>();
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < 16; ++i) {
    const Complexd z_expected =
        (i == 0b0000 || i == 0b1111) ? Complexd(s) : Complexd(0);
    const Complexd o_expected =
        (i == 0b0011 || i == 0b1100) ? Complexd(s) : Complexd(0);
    CHECK(std::abs(zero.amplitude(i) - z_expected) < 1e-15);
    CHECK(std::abs(one.amplitude(i) - o_expected) < 1e-15);
  }
}

TEST_CASE("codewords are orthonormal") {
  const auto zero = logicalZero<double>();
  const auto one = logicalOne<double>();
  CHECK(std::abs(zero.overlap(zero) - Complexd(1)) < 1e-12);
  CHECK(std::abs(one.overlap(one) - Complexd(1)) < 1e-12);
  CHECK(std::abs(zero.overlap(one)) < 1e-12);
}

TEST_CASE("encode basis and superposition") {
  const auto rho0 = encode(LogicalQubit<double>(Complexd(1), Complexd(0)));
  CHECK(fidelity(rho0, logicalZero<double>()) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const auto rho1 = encode(LogicalQubit<double>(Complexd(0), Complexd(1)));
  CHECK(fidelity(rho1, logicalOne<double>()) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Expanding c0=c1=1/sqrt(2) by hand gives amplitude 1/2 on the four
  // support strings.
  const double s = 1.0 / std::sqrt(2.0);
  const auto plus = encodePure(LogicalQubit<double>(Complexd(s), Complexd(s)));
  for (Eigen::Index i = 0; i < 16; ++i) {
    const bool support =
        i == 0b0000 || i == 0b1111 || i == 0b0011 || i == 0b1100;
    const Complexd expected = support ? Complexd(0.5) : Complexd(0);
    CHECK(std::abs(plus.amplitude(i) - expected) < 1e-15);
  }
}

TEST_CASE("encode rejects unnormalized amplitudes") {
  CHECK_THROWS_AS(LogicalQubit<double>(Complexd(1), Complexd(1)),
                  ValidationError);
}

TEST_CASE("GBP code passes the erasure check at every position") {
  const auto code = CodeSpec<double>::gbp();
  for (int p = 1; p <= 4; ++p) {
    const auto report = verifyErasureCode(code, p);
    CHECK(report.correctable);
    CHECK(report.max_off_diagonal < 1e-10);
    CHECK(report.max_diagonal_mismatch < 1e-10);
  }
}

TEST_CASE("repetition code fails the erasure check") {
  const auto code = CodeSpec<double>::repetition();
  const auto report = verifyErasureCode(code, 1);
  CHECK_FALSE(report.correctable);
  // The 00/11 diagonal factors of Z differ by 2: <00|Z1|00> - <11|Z1|11>.
  CHECK(report.max_diagonal_mismatch == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("erasure check rejects bad positions") {
  CHECK_THROWS_AS(verifyErasureCode(CodeSpec<double>::gbp(), 0), DomainError);
  CHECK_THROWS_AS(verifyErasureCode(CodeSpec<double>::gbp(), 5), DomainError);
}

TEST_CASE("loss permutations fix the codewords") {
  CHECK(lossPermutation<double>(1).empty());
  for (int p = 2; p <= 4; ++p) {
    const auto circuit = lossPermutation<double>(p);
    CHECK(circuit.size() == 1);
    for (int logical = 0; logical < 2; ++logical) {
      const auto codeword = CodeSpec<double>::gbp().codeword(logical);
      const auto mapped = circuit.apply(codeword);
      CHECK((mapped.amplitudes() - codeword.amplitudes()).norm() < 1e-12);
    }
  }
  CHECK_THROWS_AS(lossPermutation<double>(5), DomainError);
}

TEST_CASE("loss permutations move the lost site to position 1") {
  for (int p = 2; p <= 4; ++p) {
    const auto circuit = lossPermutation<double>(p);
    const auto& images = circuit.gates().front().targets();
    CHECK(images[static_cast<std::size_t>(p - 1)] == 1);
  }
}

}  // TEST_SUITE
