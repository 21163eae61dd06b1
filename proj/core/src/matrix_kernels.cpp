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

#include "bdris/matrix_kernels.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "bdris/errors.hpp"
#include "bdris/random.hpp"

namespace bdris {

namespace {

constexpr Complex kJ{0.0, 1.0};

// sigma_min / sigma_max below this is treated as singular by reunitarize.
constexpr double kSingularRatio = 1e-12;

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw InvalidArgument(std::string(what) + ": expected a non-empty square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

bool all_finite(const ComplexMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

double skew_residual(const ComplexMatrix& s) {
  return (s + s.adjoint()).norm() / (1.0 + s.norm());
}

void require_skew_hermitian(const ComplexMatrix& s) {
  require_square(s, "skew-Hermitian input");
  if (!all_finite(s)) throw InvalidArgument("skew-Hermitian input has non-finite entries");
  const double residual = skew_residual(s);
  if (!(residual <= kSkewTolerance)) {
    throw InvalidArgument("matrix is not skew-Hermitian: relative residual " +
                          std::to_string(residual));
  }
}

SkewSpectrum SkewSpectrum::factor(const ComplexMatrix& s) {
  require_skew_hermitian(s);
  const ComplexMatrix hermitian = kJ * s;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("Hermitian eigensolver failed to converge on skew-Hermitian input");
  }
  return SkewSpectrum(solver.eigenvectors(), solver.eigenvalues());
}

ComplexVector SkewSpectrum::eigenvalues() const {
  return (-kJ * frequencies_.cast<Complex>()).eval();
}

ComplexMatrix SkewSpectrum::reconstruct() const {
  return vectors_ * eigenvalues().asDiagonal() * vectors_.adjoint();
}

ComplexMatrix SkewSpectrum::exp(double mu) const {
  ComplexVector phases(frequencies_.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases[k] = std::polar(1.0, -mu * frequencies_[k]);
  }
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

ComplexVector SkewSpectrum::to_eigenbasis(const ComplexVector& v) const {
  return vectors_.adjoint() * v;
}

ComplexVector SkewSpectrum::apply_exp(double mu, const ComplexVector& coords) const {
  ComplexVector rotated(coords.size());
  for (Eigen::Index k = 0; k < coords.size(); ++k) {
    rotated[k] = std::polar(1.0, -mu * frequencies_[k]) * coords[k];
  }
  return vectors_ * rotated;
}

ComplexMatrix expm_skew(const ComplexMatrix& s, double mu) {
  if (!std::isfinite(mu)) throw InvalidArgument("expm_skew: step must be finite");
  return SkewSpectrum::factor(s).exp(mu);
}

ComplexMatrix expm_pade(const ComplexMatrix& m) {
  require_square(m, "expm_pade");
  if (!all_finite(m)) throw InvalidArgument("expm_pade: non-finite entries");
  return m.exp();
}

ComplexMatrix haar_random_unitary(Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("haar_random_unitary: n must be >= 1");
  ComplexMatrix z(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      z(i, j) = complex_gaussian_at(seed, RandomStream::haar,
                                    entry_index(static_cast<std::uint64_t>(i),
                                                static_cast<std::uint64_t>(j)));
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double modulus = std::abs(r(k, k));
    // A Gaussian matrix is singular with probability zero.
    const Complex phase = modulus > 0.0 ? r(k, k) / modulus : Complex{1.0, 0.0};
    q.col(k) *= phase;
  }
  return q;
}

ComplexMatrix reunitarize(const ComplexMatrix& m) {
  require_square(m, "reunitarize");
  if (!all_finite(m)) throw InvalidArgument("reunitarize: non-finite entries");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double largest = sigma[0];
  const double smallest = sigma[sigma.size() - 1];
  if (!(largest > 0.0) || smallest <= kSingularRatio * largest) {
    throw NumericalFailure("reunitarize: matrix is singular or ill-conditioned (sigma ratio " +
                           std::to_string(largest > 0.0 ? smallest / largest : 0.0) + ")");
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

UnitarityReport unitarity_report(const ComplexMatrix& m) {
  require_square(m, "unitarity_report");
  const ComplexMatrix defect = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  return {defect.norm(), defect.cwiseAbs().maxCoeff()};
}

}  // namespace bdris
