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

// Counter-based random draws. Every value is a pure function of
// (seed, stream, index), so Monte Carlo trials and channel draws can be
// regenerated in any order, on any thread, with identical results.

#include <complex>
#include <cstdint>

namespace bdris {

/// Stream identifiers keep unrelated consumers of one seed independent.
enum class RandomStream : std::uint64_t {
  haar = 1,
  nlos_channel = 2,
  noise = 3,
  alpha_phase = 4,
  pilots = 5,
  scene_draw = 6,
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministically derives a child seed (restart r, trial t, block b, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

/// Uniform double in (0, 1].
double uniform_at(std::uint64_t seed, RandomStream stream, std::uint64_t index) noexcept;

/// Standard circular complex Gaussian, E|z|^2 = 1.
std::complex<double> complex_gaussian_at(std::uint64_t seed, RandomStream stream,
                                         std::uint64_t index) noexcept;

/// Index for matrix entry (row, col) that does not depend on the matrix shape,
/// so a smaller draw is a leading sub-block of a larger one.
constexpr std::uint64_t entry_index(std::uint64_t row, std::uint64_t col) noexcept {
  return (row << 32) | col;
}

}  // namespace bdris
