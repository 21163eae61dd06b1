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

#include "bdris/random.hpp"

#include <cmath>
#include <numbers>

namespace bdris {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix64(mix64(seed) ^ (tag * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

namespace {

std::uint64_t counter_bits(std::uint64_t seed, RandomStream stream, std::uint64_t index) noexcept {
  const auto s = static_cast<std::uint64_t>(stream);
  return mix64(derive_seed(seed, s) ^ mix64(index));
}

}  // namespace

double uniform_at(std::uint64_t seed, RandomStream stream, std::uint64_t index) noexcept {
  // 53 random mantissa bits, shifted into (0, 1] so log() below is finite.
  const std::uint64_t bits = counter_bits(seed, stream, index) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

std::complex<double> complex_gaussian_at(std::uint64_t seed, RandomStream stream,
                                         std::uint64_t index) noexcept {
  // Box-Muller on two counters; each component has variance 1/2.
  const double u1 = uniform_at(seed, stream, 2 * index);
  const double u2 = uniform_at(seed, stream, 2 * index + 1);
  const double radius = std::sqrt(-std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace bdris
