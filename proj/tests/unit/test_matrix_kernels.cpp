// Copyright 2026 The bdris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <cmath>

#include "bdris/bdris.hpp"
#include "oracles.hpp"

using namespace bdris;

TEST_SUITE("matrix_kernels") {

TEST_CASE("expm_skew of zero is the identity") {
  for (Eigen::Index n : {1, 3, 6}) {
    const ComplexMatrix u = expm_skew(ComplexMatrix::Zero(n, n), 1.0);
    CHECK((u - ComplexMatrix::Identity(n, n)).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("expm_skew of [j pi] is -1") {
  ComplexMatrix s(1, 1);
  s(0, 0) = Complex{0.0, oracle::kPi};
  const ComplexMatrix u = expm_skew(s, 1.0);
  CHECK(std::abs(u(0, 0) - Complex{-1.0, 0.0}) < 1e-15);
}

TEST_CASE("expm_skew on a random 8x8 input is unitary and matches the series") {
  const ComplexMatrix s = oracle::random_skew(8, 11);
  const ComplexMatrix u = expm_skew(s, 0.3);
  CHECK(unitarity_report(u).frobenius_drift <= 1e-11);
  const Eigen::ComplexEigenSolver<ComplexMatrix> eig(u);
  for (Eigen::Index k = 0; k < 8; ++k) CHECK(std::abs(std::abs(eig.eigenvalues()[k]) - 1.0) <= 1e-10);
  CHECK((u - oracle::expm_taylor(0.3 * s)).norm() <= 1e-12 * 8);
  CHECK((u - expm_pade(0.3 * s)).norm() <= 1e-12 * 8);
}

TEST_CASE("spectral and Pade exponentials agree over step sizes") {
  const ComplexMatrix s = oracle::random_skew(5, 3);
  const SkewSpectrum spectrum = SkewSpectrum::factor(s);
  for (double mu : {-2.0, -0.01, 0.0, 0.5, 4.0}) {
    CHECK((spectrum.exp(mu) - expm_pade(mu * s)).norm() <= 1e-11);
  }
}

TEST_CASE("apply_exp matches exp times vector") {
  const ComplexMatrix s = oracle::random_skew(6, 5);
  const ComplexVector v = oracle::random_complex(6, 1, 9);
  const SkewSpectrum spectrum = SkewSpectrum::factor(s);
  const ComplexVector coords = spectrum.to_eigenbasis(v);
  for (double mu : {0.1, 1.7}) {
    CHECK((spectrum.apply_exp(mu, coords) - spectrum.exp(mu) * v).norm() <= 1e-12);
  }
}

TEST_CASE("factor of a diagonal input") {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  s(0, 0) = Complex{0.0, 1.0};
  s(1, 1) = Complex{0.0, -1.0};
  const SkewSpectrum spectrum = SkewSpectrum::factor(s);
  ComplexVector lambda = spectrum.eigenvalues();
  CHECK(std::abs(lambda.real().norm()) == 0.0);
  std::vector<double> im{lambda[0].imag(), lambda[1].imag()};
  std::sort(im.begin(), im.end());
  CHECK(im[0] == doctest::Approx(-1.0));
  CHECK(im[1] == doctest::Approx(1.0));
  // eigenvectors are the identity columns up to order and phase
  const ComplexMatrix v = spectrum.eigenvectors();
  for (Eigen::Index c = 0; c < 2; ++c) {
    CHECK(v.col(c).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    CHECK(v.col(c).cwiseAbs().minCoeff() == doctest::Approx(0.0));
  }
}

TEST_CASE("factor of zero has zero eigenvalues") {
  const SkewSpectrum spectrum = SkewSpectrum::factor(ComplexMatrix::Zero(4, 4));
  CHECK(spectrum.eigenvalues().norm() == 0.0);
}

TEST_CASE("factor reconstructs a random 4x4 input") {
  const ComplexMatrix s = oracle::random_skew(4, 21);
  CHECK((SkewSpectrum::factor(s).reconstruct() - s).norm() <= 1e-9);
}

TEST_CASE("non skew-Hermitian input is rejected") {
  ComplexMatrix m = oracle::random_skew(3, 1);
  m(0, 1) += 0.5;
  CHECK_THROWS_AS(SkewSpectrum::factor(m), InvalidArgument);
  CHECK_THROWS_AS(expm_skew(ComplexMatrix::Zero(2, 3), 1.0), InvalidArgument);
}

TEST_CASE("haar_random_unitary") {
  SUBCASE("n = 1 is unit modulus") {
    for (std::uint64_t seed : {0u, 1u, 99u}) {
      CHECK(std::abs(std::abs(haar_random_unitary(1, seed)(0, 0)) - 1.0) <= 1e-12);
    }
  }
  SUBCASE("deterministic per seed") {
    const ComplexMatrix a = haar_random_unitary(8, 7);
    const ComplexMatrix b = haar_random_unitary(8, 7);
    CHECK(a == b);
    CHECK(a != haar_random_unitary(8, 8));
  }
  SUBCASE("second moment of an entry is 1/n") {
    double sum = 0.0;
    const int samples = 10000;
    for (int i = 0; i < samples; ++i) sum += std::norm(haar_random_unitary(4, derive_seed(5, i))(0, 0));
    CHECK(std::abs(sum / samples - 0.25) <= 0.02);
  }
  SUBCASE("E|tr U|^2 = 1") {
    double sum = 0.0;
    const int samples = 4000;
    for (int i = 0; i < samples; ++i) sum += std::norm(haar_random_unitary(3, derive_seed(6, i)).trace());
    CHECK(std::abs(sum / samples - 1.0) <= 0.1);
  }
  SUBCASE("drift") { CHECK(unitarity_report(haar_random_unitary(8, 4)).frobenius_drift <= 1e-11); }
}

TEST_CASE("reunitarize") {
  CHECK((reunitarize(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm() <= 1e-15);
  CHECK((reunitarize(2.0 * ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm() <=
        1e-15);

  SUBCASE("small perturbation stays close") {
    const ComplexMatrix u = haar_random_unitary(6, 12);
    ComplexMatrix e = oracle::random_complex(6, 6, 13);
    e *= 1e-8 / e.norm();
    const ComplexMatrix r = reunitarize(u + e);
    CHECK((r - u).norm() <= 2e-8);
    CHECK(unitarity_report(r).frobenius_drift <= 1e-13);
  }
  SUBCASE("matches the polar factor M (M^H M)^(-1/2)") {
    const ComplexMatrix m = oracle::random_complex(4, 4, 30) + 3.0 * ComplexMatrix::Identity(4, 4);
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m.adjoint() * m);
    const ComplexMatrix inv_sqrt = eig.eigenvectors() *
                                   eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                   eig.eigenvectors().adjoint();
    CHECK((reunitarize(m) - m * inv_sqrt).norm() <= 1e-12);
  }
  SUBCASE("singular input") {
    ComplexMatrix m = ComplexMatrix::Identity(3, 3);
    m(2, 2) = 0.0;
    CHECK_THROWS_AS(reunitarize(m), NumericalFailure);
  }
}

TEST_CASE("unitarity_report") {
  CHECK(unitarity_report(ComplexMatrix::Identity(4, 4)).frobenius_drift == 0.0);
  const UnitarityReport r = unitarity_report(2.0 * ComplexMatrix::Identity(2, 2));
  CHECK(r.frobenius_drift == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r.max_entry_drift == doctest::Approx(3.0));
}

TEST_CASE("skew residual") {
  CHECK(skew_residual(oracle::random_skew(5, 2)) <= 1e-16);
  CHECK(skew_residual(ComplexMatrix::Identity(2, 2)) > 0.5);
}

}  // TEST_SUITE
