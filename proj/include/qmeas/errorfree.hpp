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
#include <vector>

#include "qmeas/quantum_objects.hpp"
#include "qmeas/quasiprob.hpp"

namespace qmeas {

/// ⟨m|Â|ψ⟩/⟨m|ψ⟩. Throws VanishingOverlap when |⟨m|ψ⟩| ≤ overlap_floor.
Complex weak_value(const Observable& obs, const State& psi, const CVector& m,
                   double overlap_floor = 1e-12);

struct WeakValueTable {
    /// Zero for undefined outcomes.
    std::vector<Complex> values;
    double max_imag = 0.0;
    std::vector<std::size_t> undefined_outcomes;
};

/// Weak values for every vector of a rank-one measurement. Throws NotRankOne
/// when an element is not of the form λ|m⟩⟨m|.
WeakValueTable weak_values(const Observable& obs, const Povm& povm, const State& psi,
                           double overlap_floor = 1e-12);

struct Certification {
    bool error_free = false;
    double max_imag = 0.0;
    /// Re(weak value) per outcome; ⟨Â⟩_ψ for undefined outcomes.
    EstimateAssignment estimates;
    std::vector<std::size_t> undefined_outcomes;
    /// Largest |⟨m|Â|ψ⟩| over undefined outcomes. A nonzero value here means
    /// no estimate can make that outcome error free.
    double undefined_leak = 0.0;
};

/// Error-free test for a rank-one measurement: all defined weak values must
/// have |Im| ≤ tol, and every undefined outcome must satisfy
/// |⟨m|Â|ψ⟩| ≤ tol·max(1, ‖Â‖_max).
Certification certify_error_free(const Observable& obs, const Povm& povm, const State& psi,
                                 double tol = 1e-10, double overlap_floor = 1e-12);

struct DiracReality {
    bool real_dirac = false;
    double max_imag_entry = 0.0;
};

/// Real Dirac distribution check, a sufficient condition for error-free
/// measurement of every function of Â.
DiracReality dirac_reality_check(const Observable& obs, const Povm& povm, const State& psi,
                                 double tol = 1e-10);

/// Â = B̂ + M̂ with M̂ diagonal in the measurement basis and |ψ⟩ an
/// eigenvector of B̂ with eigenvalue `gauge`.
struct Decomposition {
    double gauge = 0.0;
    CMatrix m_matrix;
    CMatrix b_matrix;
    std::vector<double> m_values;
    EstimateAssignment a_estimates;
    /// M̃_a per spectral group of Â; zero for groups listed in zero_probability_a.
    std::vector<double> reverse_estimates;
    std::vector<std::size_t> zero_probability_a;
    double eigenstate_defect = 0.0;
};

/// Requires certify_error_free to pass at tol.certify_tol (NotErrorFree).
/// The gauge defaults to ⟨ψ|Â|ψ⟩, which makes ⟨ψ|M̂|ψ⟩ = 0.
Decomposition decompose(const Observable& obs, const ProjectiveBasis& basis, const State& psi,
                        std::optional<double> gauge = std::nullopt, const Tolerances& tol = {});

/// M_m = Σ_a (A_a − B_ψ) P(a,m|ψ)/P(m|ψ). Throws ZeroMarginal.
std::vector<double> transform_A_to_M(const std::vector<double>& a_values, double gauge,
                                     const JointWeightTable& w, double prob_floor = 1e-12);

/// M̃_a = Σ_m M_m P(a,m|ψ)/P(a|ψ). Throws ZeroMarginal.
std::vector<double> reverse_estimates(const std::vector<double>& m_values,
                                      const JointWeightTable& w, double prob_floor = 1e-12);

/// A_a = Σ_m (M_m + B_ψ) P(a,m|ψ)/P(a|ψ). Throws ZeroMarginal.
std::vector<double> transform_M_to_A(const std::vector<double>& m_values, double gauge,
                                     const JointWeightTable& w, double prob_floor = 1e-12);

} // namespace qmeas
