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

#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace bdris {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Relative tolerance for accepting a matrix as skew-Hermitian:
/// ||S + S^H||_F <= kSkewTolerance * (1 + ||S||_F).
inline constexpr double kSkewTolerance = 1e-10;

/// Drift above which iterates are pulled back onto the unitary group.
inline constexpr double kReunitarizeThreshold = 1e-10;

struct UnitarityReport {
  double frobenius_drift = 0.0;  ///< ||M^H M - I||_F
  double max_entry_drift = 0.0;  ///< max_ij |(M^H M - I)_ij|
};

/// ||S + S^H||_F / (1 + ||S||_F).
double skew_residual(const ComplexMatrix& s);

/// Throws InvalidArgument unless `s` is square, finite and skew-Hermitian
/// within kSkewTolerance.
void require_skew_hermitian(const ComplexMatrix& s);

/// Spectral factorization S = V diag(lambda) V^H of a skew-Hermitian matrix.
///
/// Obtained from the Hermitian eigenproblem of jS, so V is unitary and every
/// lambda is purely imaginary. Once factored, exp(mu S) costs one O(n^3)
/// product for any mu, and its action on a vector costs O(n^2), which is what
/// makes re-testing many step sizes cheap.
class SkewSpectrum {
 public:
  /// Factors `s`; throws InvalidArgument for non-skew input and
  /// NumericalFailure if the eigensolver does not converge.
  static SkewSpectrum factor(const ComplexMatrix& s);

  Eigen::Index size() const { return vectors_.rows(); }
  const ComplexMatrix& eigenvectors() const { return vectors_; }
  /// Purely imaginary eigenvalues lambda_k = -j w_k.
  ComplexVector eigenvalues() const;

  /// V diag(lambda) V^H.
  ComplexMatrix reconstruct() const;
  /// exp(mu S) = V diag(exp(mu lambda)) V^H.
  ComplexMatrix exp(double mu) const;

  /// Coordinates V^H v, reusable across step sizes.
  ComplexVector to_eigenbasis(const ComplexVector& v) const;
  /// exp(mu S) v given coords = V^H v.
  ComplexVector apply_exp(double mu, const ComplexVector& coords) const;

 private:
  SkewSpectrum(ComplexMatrix vectors, Eigen::VectorXd frequencies)
      : vectors_(std::move(vectors)), frequencies_(std::move(frequencies)) {}

  ComplexMatrix vectors_;
  Eigen::VectorXd frequencies_;  // w_k with jS = V diag(w) V^H
};

/// exp(mu S) for skew-Hermitian S via the spectral path.
ComplexMatrix expm_skew(const ComplexMatrix& s, double mu);

/// Generic scaling-and-squaring Pade exponential for arbitrary square input.
ComplexMatrix expm_pade(const ComplexMatrix& m);

/// Haar-distributed unitary: QR of an i.i.d. complex Gaussian matrix with the
/// phases of diag(R) moved into Q. Deterministic per (n, seed).
ComplexMatrix haar_random_unitary(Eigen::Index n, std::uint64_t seed);

/// Nearest unitary matrix in Frobenius norm (polar factor U V^H of the SVD).
/// Throws NumericalFailure if `m` is singular or nearly so.
ComplexMatrix reunitarize(const ComplexMatrix& m);

UnitarityReport unitarity_report(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

}  // namespace bdris
