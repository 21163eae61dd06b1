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

#include <cstdint>
#include <string_view>

#include "bdris/matrix_kernels.hpp"

namespace bdris {

enum class Architecture { fully_connected, group_connected, single_connected };

std::string_view to_string(Architecture arch);

/// Unitarity tolerance for fully- and group-connected surfaces.
inline constexpr double kUnitaryTolerance = 1e-9;
/// Unit-modulus tolerance for single-connected (diagonal) surfaces.
inline constexpr double kUnitModulusTolerance = 1e-12;

/// A surface's scattering matrix together with its circuit architecture.
///
/// A group-connected surface with group size g is block diagonal with g x g
/// unitary blocks; g = N_R is the fully-connected case and g = 1 the
/// conventional diagonal surface. The factories validate the matrix against
/// the architecture and throw InvalidArgument on violation.
class ScatteringMatrix {
 public:
  static ScatteringMatrix fully_connected(ComplexMatrix m);
  static ScatteringMatrix group_connected(ComplexMatrix m, Eigen::Index group_size);
  static ScatteringMatrix single_connected(const ComplexVector& diagonal);
  /// Picks the architecture label from the group size (1, N_R or in between).
  static ScatteringMatrix with_group_size(ComplexMatrix m, Eigen::Index group_size);

  const ComplexMatrix& matrix() const { return matrix_; }
  Architecture architecture() const { return architecture_; }
  Eigen::Index size() const { return matrix_.rows(); }
  Eigen::Index group_size() const { return group_size_; }
  Eigen::Index block_count() const { return matrix_.rows() / group_size_; }

  /// Re-checks the architecture invariants; throws InvalidArgument.
  void validate() const;

 private:
  ScatteringMatrix(ComplexMatrix m, Architecture arch, Eigen::Index group_size);

  ComplexMatrix matrix_;
  Architecture architecture_;
  Eigen::Index group_size_;
};

/// Block-diagonal matrix of independent Haar blocks. A single block
/// (group_size == n) is exactly haar_random_unitary(n, seed); otherwise block
/// b is drawn with derive_seed(seed, b).
ScatteringMatrix random_scattering(Eigen::Index n, Eigen::Index group_size, std::uint64_t seed);

/// Zeroes every entry outside the diagonal blocks of size `group_size`.
ComplexMatrix mask_to_blocks(const ComplexMatrix& m, Eigen::Index group_size);

}  // namespace bdris
