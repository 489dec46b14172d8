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

#include "qmeas/random.hpp"

#include <cmath>
#include <numbers>

#include "qmeas/error.hpp"

namespace qmeas {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
}

void gram_schmidt(CMatrix& columns) {
    for (Eigen::Index k = 0; k < columns.cols(); ++k) {
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < k; ++j) {
                const Complex proj = columns.col(j).dot(columns.col(k));
                columns.col(k) -= proj * columns.col(j);
            }
        }
        const double n = columns.col(k).norm();
        if (n < 1e-8) throw Error(ErrorCode::DegenerateDraw, "dependent random columns");
        columns.col(k) /= n;
    }
}

RMatrix Rng::real_orthogonal(Eigen::Index d) {
    CMatrix g(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) g(i, j) = normal();
    }
    gram_schmidt(g);
    return g.real();
}

CMatrix Rng::unitary(Eigen::Index d) {
    CMatrix g(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) g(i, j) = complex_normal();
    }
    gram_schmidt(g);
    return g;
}

RVector Rng::real_unit_vector(Eigen::Index d) {
    RVector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = normal();
    return v / v.norm();
}

CVector Rng::complex_unit_vector(Eigen::Index d) {
    CVector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = complex_normal();
    return v / v.norm();
}

} // namespace qmeas
