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

#include "qmeas/quantum_objects.hpp"

#include <algorithm>
#include <cmath>

#include "qmeas/error.hpp"

namespace qmeas {

namespace {

void require_finite(const CMatrix& m, const char* what) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::NumericalFailure, std::string(what) + " has non-finite entries");
    }
}

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square and non-empty");
    }
}

void check_orthonormal(const CMatrix& columns, double tol, const char* what) {
    const auto n = columns.rows();
    if (columns.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + " needs exactly dim vectors");
    }
    const double defect = max_abs(columns.adjoint() * columns - CMatrix::Identity(n, n));
    if (defect > tol) {
        throw Error(ErrorCode::NotComplete, std::string(what) +
                                                " is not orthonormal (defect " +
                                                std::to_string(defect) + ")");
    }
}

Probability clamp(double p, double clamp_tol) {
    if (p < -clamp_tol) {
        throw Error(ErrorCode::NegativeProbability, "probability " + std::to_string(p));
    }
    Probability out{std::clamp(p, 0.0, 1.0), 0.0};
    out.clamp_defect = std::abs(p - out.value);
    return out;
}

} // namespace

State make_state(const CVector& v, double norm_tol, bool strict) {
    if (v.size() == 0) throw Error(ErrorCode::DimensionMismatch, "empty state vector");
    if (!v.allFinite()) throw Error(ErrorCode::NumericalFailure, "state has non-finite entries");
    const double norm = v.norm();
    if (norm == 0.0) throw Error(ErrorCode::ZeroVector, "state vector is zero");
    if (strict && std::abs(norm - 1.0) > norm_tol) {
        throw Error(ErrorCode::NotNormalized, "state norm " + std::to_string(norm));
    }
    return State(v / norm);
}

DensityOperator DensityOperator::from_state(const State& psi) {
    return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator make_density(const CMatrix& m, const Tolerances& tol) {
    require_square(m, "density operator");
    require_finite(m, "density operator");
    const auto d = structural_defects(m);
    if (d.hermiticity_defect > tol.herm_tol) {
        throw Error(ErrorCode::NotHermitian, "density operator is not Hermitian");
    }
    if (d.psd_defect > tol.psd_tol) {
        throw Error(ErrorCode::NotPsd, "density operator has a negative eigenvalue");
    }
    const double trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
    if (trace_defect > tol.norm_tol) {
        throw Error(ErrorCode::NotNormalized, "density operator trace deviates from 1");
    }
    return DensityOperator(m);
}

Observable::Observable(const CMatrix& matrix, const Tolerances& tol,
                       std::vector<std::string> labels)
    : matrix_(matrix), labels_(std::move(labels)) {
    require_square(matrix_, "observable");
    require_finite(matrix_, "observable");
    spectral_ = hermitian_eigendecompose(matrix_, tol.group_tol, tol.herm_tol);
    const double recon = max_abs(spectral_.reconstruct() - matrix_);
    if (recon > tol.recon_tol * std::max(1.0, max_abs(matrix_))) {
        throw Error(ErrorCode::NumericalFailure,
                    "spectral reconstruction defect " + std::to_string(recon));
    }
    for (std::size_t g = 0; g < spectral_.groups.size(); ++g) {
        values_.push_back(spectral_.group_value(g));
        projectors_.push_back(spectral_.group_projector(g));
    }
    if (!labels_.empty() && labels_.size() != projectors_.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "observable has " + std::to_string(projectors_.size()) +
                        " outcome groups but " + std::to_string(labels_.size()) + " labels");
    }
}

Observable Observable::from_spectrum(const RVector& eigenvalues, const CMatrix& basis,
                                     const Tolerances& tol, std::vector<std::string> labels) {
    if (eigenvalues.size() != basis.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "eigenvalue count differs from basis size");
    }
    require_finite(basis, "observable basis");
    if (!eigenvalues.allFinite()) {
        throw Error(ErrorCode::NumericalFailure, "eigenvalues are not finite");
    }
    check_orthonormal(basis, tol.ortho_tol, "observable basis");
    const CMatrix m = basis * eigenvalues.cast<Complex>().asDiagonal() * basis.adjoint();
    return Observable(m, tol, std::move(labels));
}

ProjectiveBasis::ProjectiveBasis(const CMatrix& columns, const Tolerances& tol)
    : vectors_(columns) {
    if (columns.size() == 0) throw Error(ErrorCode::DimensionMismatch, "empty basis");
    require_finite(columns, "basis");
    check_orthonormal(columns, tol.ortho_tol, "measurement basis");
}

bool Povm::all_rank_one() const {
    return std::all_of(rank_one_.begin(), rank_one_.end(),
                       [](const auto& r) { return r.has_value(); });
}

Povm Povm::from_basis(const ProjectiveBasis& basis) {
    Povm p;
    for (std::size_t m = 0; m < basis.size(); ++m) {
        CVector v = basis.vector(m);
        p.elements_.push_back(v * v.adjoint());
        p.rank_one_.push_back(RankOneForm{1.0, std::move(v)});
    }
    return p;
}

Povm validate_povm(const std::vector<CMatrix>& elements, const Tolerances& tol) {
    if (elements.empty()) throw Error(ErrorCode::DimensionMismatch, "POVM has no elements");
    const auto d = elements.front().rows();
    CMatrix sum = CMatrix::Zero(d, d);
    Povm p;
    for (std::size_t m = 0; m < elements.size(); ++m) {
        const CMatrix& e = elements[m];
        require_square(e, "POVM element");
        require_finite(e, "POVM element");
        if (e.rows() != d) {
            throw Error(ErrorCode::DimensionMismatch,
                        "POVM element " + std::to_string(m) + " has wrong dimension");
        }
        const auto es = hermitian_eigendecompose(e, tol.group_tol, tol.herm_tol);
        if (es.eigenvalues[0] < -tol.psd_tol) {
            throw Error(ErrorCode::NotPsd, "POVM element " + std::to_string(m) +
                                               " has eigenvalue " +
                                               std::to_string(es.eigenvalues[0]));
        }
        std::optional<RankOneForm> r1;
        const double top = es.eigenvalues[d - 1];
        const double second = d >= 2 ? es.eigenvalues[d - 2] : 0.0;
        if (top > tol.rank_tol && second <= tol.rank_tol) {
            r1 = RankOneForm{top, es.eigenvectors.col(d - 1)};
        }
        p.elements_.push_back(0.5 * (e + e.adjoint()));
        p.rank_one_.push_back(std::move(r1));
        sum += e;
    }
    const double comp = max_abs(sum - CMatrix::Identity(d, d));
    if (comp > tol.comp_tol) {
        throw Error(ErrorCode::NotComplete,
                    "POVM elements sum to identity only within " + std::to_string(comp));
    }
    return p;
}

Probability povm_probability(const CMatrix& element, const State& psi, const Tolerances& tol) {
    if (static_cast<std::size_t>(element.rows()) != psi.dim() || element.rows() != element.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "POVM element and state dimensions differ");
    }
    return clamp(sandwich(psi.amplitudes(), element, psi.amplitudes()).real(), tol.clamp_tol);
}

Probability povm_probability(const CMatrix& element, const DensityOperator& rho,
                             const Tolerances& tol) {
    if (element.rows() != rho.matrix().rows() || element.cols() != rho.matrix().cols()) {
        throw Error(ErrorCode::DimensionMismatch, "POVM element and density dimensions differ");
    }
    return clamp((element * rho.matrix()).trace().real(), tol.clamp_tol);
}

Probability born_probability(const Observable& obs, std::size_t a, const State& psi,
                             const Tolerances& tol) {
    if (obs.dim() != psi.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "observable and state dimensions differ");
    }
    if (a >= obs.num_outcomes()) {
        throw Error(ErrorCode::IndexOutOfRange, "outcome group " + std::to_string(a));
    }
    return clamp(sandwich(psi.amplitudes(), obs.projector(a), psi.amplitudes()).real(),
                 tol.clamp_tol);
}

double expectation(const CMatrix& op, const State& psi) {
    if (static_cast<std::size_t>(op.rows()) != psi.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "operator and state dimensions differ");
    }
    return sandwich(psi.amplitudes(), op, psi.amplitudes()).real();
}

} // namespace qmeas
