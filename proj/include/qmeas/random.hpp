// Copyright 2026 The qmeas Authors.
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
#include <random>

#include "qmeas/linalg.hpp"

namespace qmeas {

/// Seedable generator with a fully specified output stream: the 64-bit
/// Mersenne Twister (std::mt19937_64, seeded with the raw seed) feeding
///   uniform()  = (x >> 11) · 2^-53                  in [0, 1)
///   normal()   = Box-Muller, sqrt(-2 ln(1-u1)) cos(2π u2), one value per pair
/// The standard library distributions are avoided because their output is
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    Complex complex_normal();

    /// Gaussian-random orthonormal columns via modified Gram-Schmidt.
    RMatrix real_orthogonal(Eigen::Index d);
    CMatrix unitary(Eigen::Index d);
    RVector real_unit_vector(Eigen::Index d);
    CVector complex_unit_vector(Eigen::Index d);

private:
    std::mt19937_64 engine_;
};

/// Orthonormalizes the columns in place; throws DegenerateDraw if a column
/// becomes numerically dependent.
void gram_schmidt(CMatrix& columns);

} // namespace qmeas
