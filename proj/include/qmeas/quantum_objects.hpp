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

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qmeas/linalg.hpp"
#include "qmeas/tolerances.hpp"

namespace qmeas {

/// Normalized pure state |ψ⟩.
class State {
public:
    const CVector& amplitudes() const { return amplitudes_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

private:
    friend State make_state(const CVector&, double, bool);
    explicit State(CVector v) : amplitudes_(std::move(v)) {}
    CVector amplitudes_;
};

/// In strict mode a vector whose norm deviates from 1 by more than norm_tol
/// is rejected with NotNormalized; otherwise it is rescaled to unit norm.
State make_state(const CVector& v, double norm_tol = 1e-10, bool strict = true);

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityOperator {
public:
    const CMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

    static DensityOperator from_state(const State& psi);

private:
    friend DensityOperator make_density(const CMatrix&, const Tolerances&);
    explicit DensityOperator(CMatrix m) : matrix_(std::move(m)) {}
    CMatrix matrix_;
};

DensityOperator make_density(const CMatrix& m, const Tolerances& tol = {});

/// Hermitian target observable together with its spectral system. The
/// outcomes a are the degeneracy groups, each carried by the projector Π_a.
class Observable {
public:
    explicit Observable(const CMatrix& matrix, const Tolerances& tol = {},
                        std::vector<std::string> labels = {});

    /// Observable Σ_k λ_k |v_k⟩⟨v_k| from eigenvalues and basis columns.
    static Observable from_spectrum(const RVector& eigenvalues, const CMatrix& basis,
                                    const Tolerances& tol = {},
                                    std::vector<std::string> labels = {});

    const CMatrix& matrix() const { return matrix_; }
    const HermitianEigenSystem& spectral() const { return spectral_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    std::size_t num_outcomes() const { return projectors_.size(); }
    bool nondegenerate() const { return num_outcomes() == dim(); }

    /// Eigenvalue A_a of outcome group a (ascending).
    double value(std::size_t a) const { return values_.at(a); }
    const std::vector<double>& values() const { return values_; }
    const CMatrix& projector(std::size_t a) const { return projectors_.at(a); }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    CMatrix matrix_;
    HermitianEigenSystem spectral_;
    std::vector<double> values_;
    std::vector<CMatrix> projectors_;
    std::vector<std::string> labels_;
};

/// Complete orthonormal basis {|m⟩}, stored as matrix columns.
class ProjectiveBasis {
public:
    explicit ProjectiveBasis(const CMatrix& columns, const Tolerances& tol = {});

    const CMatrix& vectors() const { return vectors_; }
    CVector vector(std::size_t m) const { return vectors_.col(static_cast<Eigen::Index>(m)); }
    std::size_t dim() const { return static_cast<std::size_t>(vectors_.rows()); }
    std::size_t size() const { return static_cast<std::size_t>(vectors_.cols()); }

private:
    CMatrix vectors_;
};

/// Element of the form λ|m⟩⟨m| with unit |m⟩.
struct RankOneForm {
    double scale = 1.0;
    CVector vector;
};

/// Positive operator-valued measure {Ê_m}.
class Povm {
public:
    const std::vector<CMatrix>& elements() const { return elements_; }
    const CMatrix& element(std::size_t m) const { return elements_.at(m); }
    std::size_t size() const { return elements_.size(); }
    std::size_t dim() const {
        return elements_.empty() ? 0 : static_cast<std::size_t>(elements_.front().rows());
    }
    const std::optional<RankOneForm>& rank_one(std::size_t m) const { return rank_one_.at(m); }
    bool all_rank_one() const;

    static Povm from_basis(const ProjectiveBasis& basis);

private:
    friend Povm validate_povm(const std::vector<CMatrix>&, const Tolerances&);
    std::vector<CMatrix> elements_;
    std::vector<std::optional<RankOneForm>> rank_one_;
};

/// Checks each element for PSD and the set for completeness; records the
/// λ|m⟩⟨m| form of elements whose second-largest eigenvalue is ≤ rank_tol.
Povm validate_povm(const std::vector<CMatrix>& elements, const Tolerances& tol = {});

/// Estimated values Ã_m assigned to the measurement outcomes.
struct EstimateAssignment {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t m) const { return values[m]; }
};

struct Probability {
    double value = 0.0;
    /// Amount removed by clamping into [0, 1].
    double clamp_defect = 0.0;
};

Probability povm_probability(const CMatrix& element, const State& psi, const Tolerances& tol = {});
Probability povm_probability(const CMatrix& element, const DensityOperator& rho,
                             const Tolerances& tol = {});

/// ⟨ψ|Π_a|ψ⟩ for spectral group a.
Probability born_probability(const Observable& obs, std::size_t a, const State& psi,
                             const Tolerances& tol = {});

/// ⟨ψ|Â|ψ⟩
double expectation(const CMatrix& op, const State& psi);

} // namespace qmeas
