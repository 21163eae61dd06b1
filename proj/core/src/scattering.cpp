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

#include "bdris/scattering.hpp"

#include <cmath>
#include <string>

#include "bdris/errors.hpp"
#include "bdris/random.hpp"

namespace bdris {

std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::fully_connected: return "fully-connected";
    case Architecture::group_connected: return "group-connected";
    case Architecture::single_connected: return "single-connected";
  }
  return "unknown";
}

ScatteringMatrix::ScatteringMatrix(ComplexMatrix m, Architecture arch, Eigen::Index group_size)
    : matrix_(std::move(m)), architecture_(arch), group_size_(group_size) {
  validate();
}

ScatteringMatrix ScatteringMatrix::fully_connected(ComplexMatrix m) {
  const Eigen::Index n = m.rows();
  return ScatteringMatrix(std::move(m), Architecture::fully_connected, n);
}

ScatteringMatrix ScatteringMatrix::group_connected(ComplexMatrix m, Eigen::Index group_size) {
  return ScatteringMatrix(std::move(m), Architecture::group_connected, group_size);
}

ScatteringMatrix ScatteringMatrix::single_connected(const ComplexVector& diagonal) {
  return ScatteringMatrix(ComplexMatrix(diagonal.asDiagonal()), Architecture::single_connected, 1);
}

ScatteringMatrix ScatteringMatrix::with_group_size(ComplexMatrix m, Eigen::Index group_size) {
  if (group_size == m.rows()) return fully_connected(std::move(m));
  if (group_size == 1) {
    return ScatteringMatrix(std::move(m), Architecture::single_connected, 1);
  }
  return group_connected(std::move(m), group_size);
}

void ScatteringMatrix::validate() const {
  const Eigen::Index n = matrix_.rows();
  if (n < 1 || matrix_.cols() != n) {
    throw InvalidArgument("scattering matrix must be square and non-empty");
  }
  if (!all_finite(matrix_)) throw InvalidArgument("scattering matrix has non-finite entries");
  if (group_size_ < 1 || n % group_size_ != 0) {
    throw InvalidArgument("group size " + std::to_string(group_size_) + " does not divide N_R = " +
                          std::to_string(n));
  }
  if (architecture_ == Architecture::fully_connected && group_size_ != n) {
    throw InvalidArgument("fully-connected surface must have group size N_R");
  }
  if (architecture_ == Architecture::single_connected && group_size_ != 1) {
    throw InvalidArgument("single-connected surface must have group size 1");
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i / group_size_ != j / group_size_ && matrix_(i, j) != Complex{}) {
        throw InvalidArgument("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") lies outside the diagonal blocks but is non-zero");
      }
    }
  }

  if (architecture_ == Architecture::single_connected) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(std::abs(matrix_(k, k)) - 1.0) > kUnitModulusTolerance) {
        throw InvalidArgument("single-connected entry " + std::to_string(k) +
                              " is not unit modulus");
      }
    }
    return;
  }
  for (Eigen::Index b = 0; b < n / group_size_; ++b) {
    const auto block = matrix_.block(b * group_size_, b * group_size_, group_size_, group_size_);
    const double drift = unitarity_report(block).frobenius_drift;
    if (drift > kUnitaryTolerance) {
      throw InvalidArgument("block " + std::to_string(b) + " is not unitary (drift " +
                            std::to_string(drift) + ")");
    }
  }
}

ScatteringMatrix random_scattering(Eigen::Index n, Eigen::Index group_size, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("random_scattering: n must be >= 1");
  if (group_size < 1 || n % group_size != 0) {
    throw InvalidArgument("random_scattering: group size must divide n");
  }
  if (group_size == n) {
    return ScatteringMatrix::with_group_size(haar_random_unitary(n, seed), n);
  }
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index b = 0; b < n / group_size; ++b) {
    m.block(b * group_size, b * group_size, group_size, group_size) =
        haar_random_unitary(group_size, derive_seed(seed, static_cast<std::uint64_t>(b)));
  }
  return ScatteringMatrix::with_group_size(std::move(m), group_size);
}

ComplexMatrix mask_to_blocks(const ComplexMatrix& m, Eigen::Index group_size) {
  const Eigen::Index n = m.rows();
  if (group_size < 1 || n % group_size != 0 || m.cols() != n) {
    throw InvalidArgument("mask_to_blocks: group size must divide a square matrix");
  }
  if (group_size == n) return m;
  ComplexMatrix masked = ComplexMatrix::Zero(n, n);
  for (Eigen::Index b = 0; b < n / group_size; ++b) {
    masked.block(b * group_size, b * group_size, group_size, group_size) =
        m.block(b * group_size, b * group_size, group_size, group_size);
  }
  return masked;
}

}  // namespace bdris
