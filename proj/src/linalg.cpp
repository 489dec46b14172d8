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

#include "qmeas/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmeas/error.hpp"

namespace qmeas {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::NotComplete: return "NotComplete";
    case ErrorCode::MarginalMismatch: return "MarginalMismatch";
    case ErrorCode::StepTooSmall: return "StepTooSmall";
    case ErrorCode::DegenerateTarget: return "DegenerateTarget";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::AllOutcomesZero: return "AllOutcomesZero";
    case ErrorCode::VanishingOverlap: return "VanishingOverlap";
    case ErrorCode::NotRankOne: return "NotRankOne";
    case ErrorCode::NotErrorFree: return "NotErrorFree";
    case ErrorCode::ZeroMarginal: return "ZeroMarginal";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::EstimateIdentityViolated: return "EstimateIdentityViolated";
    case ErrorCode::DegenerateDraw: return "DegenerateDraw";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

double HermitianEigenSystem::group_value(std::size_t g) const {
    if (g >= groups.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "spectral group " + std::to_string(g));
    }
    double sum = 0.0;
    for (std::size_t k : groups[g]) sum += eigenvalues[static_cast<Eigen::Index>(k)];
    return sum / static_cast<double>(groups[g].size());
}

CMatrix HermitianEigenSystem::group_projector(std::size_t g) const {
    if (g >= groups.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "spectral group " + std::to_string(g));
    }
    const auto n = eigenvectors.rows();
    CMatrix p = CMatrix::Zero(n, n);
    for (std::size_t k : groups[g]) {
        const CVector v = eigenvectors.col(static_cast<Eigen::Index>(k));
        p += v * v.adjoint();
    }
    return p;
}

CMatrix HermitianEigenSystem::reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

double max_abs(const CMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

StructuralDefects structural_defects(const CMatrix& m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "structural_defects needs a square matrix");
    }
    StructuralDefects out;
    if (m.size() == 0) return out;
    out.hermiticity_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    const CMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NumericalFailure, "eigenvalue solver did not converge");
    }
    out.psd_defect = std::max(0.0, -solver.eigenvalues().minCoeff());
    return out;
}

void fix_phase(Eigen::Ref<CVector> v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > 1e-12) {
            v *= std::conj(v[i]) / mag;
            v[i] = Complex(std::abs(v[i]), 0.0);
            return;
        }
    }
}

HermitianEigenSystem hermitian_eigendecompose(const CMatrix& m, double group_tol, double herm_tol) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "eigendecomposition needs a square matrix");
    }
    const double scale = max_abs(m);
    const double herm_defect = m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > herm_tol * std::max(1.0, scale)) {
        throw Error(ErrorCode::NotHermitian,
                    "hermiticity defect " + std::to_string(herm_defect));
    }
    const CMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NumericalFailure, "eigenvalue solver did not converge");
    }

    const auto n = sym.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return solver.eigenvalues()[i] < solver.eigenvalues()[j];
    });

    HermitianEigenSystem es;
    es.eigenvalues.resize(n);
    es.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        es.eigenvalues[k] = solver.eigenvalues()[src];
        es.eigenvectors.col(k) = solver.eigenvectors().col(src);
        fix_phase(es.eigenvectors.col(k));
    }

    // Each group is anchored on its smallest member so that a slow drift of
    // closely spaced eigenvalues does not chain into one group.
    const double threshold = group_tol * scale;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!es.groups.empty()) {
            const auto anchor = static_cast<Eigen::Index>(es.groups.back().front());
            if (es.eigenvalues[k] - es.eigenvalues[anchor] <= threshold) {
                es.groups.back().push_back(static_cast<std::size_t>(k));
                continue;
            }
        }
        es.groups.push_back({static_cast<std::size_t>(k)});
    }
    return es;
}

double commutator_defect(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "commutator of mismatched matrices");
    }
    return max_abs(a * b - b * a);
}

CMatrix outer(const CVector& u, const CVector& v) { return u * v.adjoint(); }

Complex sandwich(const CVector& u, const CMatrix& m, const CVector& v) {
    return u.dot(m * v); // Eigen's dot conjugates the first argument
}

} // namespace qmeas
