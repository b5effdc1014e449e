// Copyright 2026 The qsurrogate Authors
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

#include <random>

#include "qsurrogate/linalg.hpp"

namespace qsurrogate {

/// Entries with independent standard normal real and imaginary parts.
[[nodiscard]] Matrix random_ginibre(std::mt19937_64 &rng, Index rows, Index cols);
[[nodiscard]] Matrix random_hermitian(std::mt19937_64 &rng, Index d, double scale = 1.0);
[[nodiscard]] Matrix random_unitary(std::mt19937_64 &rng, Index d);
/// Full-rank state W W^dagger / tr, W Ginibre.
[[nodiscard]] Matrix random_density(std::mt19937_64 &rng, Index d);
/// Hermitian with the given spectrum in a Haar-random basis.
[[nodiscard]] Matrix random_with_spectrum(std::mt19937_64 &rng, const RealVector &spectrum);

} // namespace qsurrogate
