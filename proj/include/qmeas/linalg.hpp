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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qmeas {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Spectral system of a Hermitian matrix.
///
/// Eigenvalues are ascending; eigenvector columns are orthonormal, with the
/// first component of magnitude > 1e-12 made real positive. Indices whose
/// eigenvalues agree within the grouping threshold form one degeneracy group.
struct HermitianEigenSystem {
    RVector eigenvalues;
    CMatrix eigenvectors;
    std::vector<std::vector<std::size_t>> groups;

    std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
    /// Mean eigenvalue of group `g`.
    double group_value(std::size_t g) const;
    /// Orthogonal projector onto the span of group `g`.
    CMatrix group_projector(std::size_t g) const;
    CMatrix reconstruct() const;
};

struct StructuralDefects {
    double hermiticity_defect = 0.0;
    double psd_defect = 0.0;
};

/// Largest absolute entry, ‖M‖_max.
double max_abs(const CMatrix& m);

/// max |M_ij − conj(M_ji)| and max(0, −λ_min) of the Hermitian part.
StructuralDefects structural_defects(const CMatrix& m);

/// Throws NotHermitian when the hermiticity defect exceeds
/// herm_tol·max(1, ‖M‖_max), NumericalFailure when the solver does not
/// converge. group_tol is relative to ‖M‖_max.
HermitianEigenSystem hermitian_eigendecompose(const CMatrix& m, double group_tol = 1e-8,
                                              double herm_tol = 1e-10);

/// ‖AB − BA‖_max.
double commutator_defect(const CMatrix& a, const CMatrix& b);

/// Multiplies column `v` by a phase so its first non-negligible component is
/// real positive.
void fix_phase(Eigen::Ref<CVector> v);

CMatrix outer(const CVector& u, const CVector& v);

/// ⟨u|M|v⟩
Complex sandwich(const CVector& u, const CMatrix& m, const CVector& v);

} // namespace qmeas
