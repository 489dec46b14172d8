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

#include <vector>

#include "qmeas/errorfree.hpp"

namespace qmeas {

/// The correlation C(AM|ψ) evaluated along every available route.
struct CorrelationReport {
    double via_m_context = 0.0;  // Σ_m Ã_m M_m P(m|ψ)
    double via_a_context = 0.0;  // Σ_a A_a M̃_a P(a|ψ)
    double via_weights = 0.0;    // Σ_{a,m} A_a M_m P(a,m|ψ)
    Complex via_operator;        // ⟨ψ|M̂Â|ψ⟩
    Complex via_operator_reversed;  // ⟨ψ|ÂM̂|ψ⟩, diagnostic only
    double via_A_moments = 0.0;  // ⟨Â²⟩ − B_ψ⟨Â⟩
    double via_M_moments = 0.0;  // ⟨M̂²⟩ + B_ψ⟨M̂⟩
    /// Largest pairwise difference among the real-valued routes and
    /// Re⟨ψ|M̂Â|ψ⟩.
    double max_spread = 0.0;
    double imag_operator = 0.0;
};

CorrelationReport correlation_report(const Decomposition& d, const Observable& obs,
                                     const JointWeightTable& w, const State& psi);

struct CorrelationMoments {
    double from_A = 0.0;
    double from_M = 0.0;
};

/// Throws PreconditionViolated when ‖(Â − M̂)|ψ⟩ − B_ψ|ψ⟩‖ exceeds
/// decomposition_tol.
CorrelationMoments correlation_moments(const Observable& obs, const CMatrix& m_op, double gauge,
                                       const State& psi, double decomposition_tol = 1e-9);

struct CorrelationForms {
    double form1 = 0.0;  // Σ Ã_m M_m P_m
    double form2 = 0.0;  // Σ (M_m + B_ψ) M_m P_m
    double form3 = 0.0;  // Σ Ã_m (Ã_m − B_ψ) P_m
};

/// Throws EstimateIdentityViolated unless Ã_m = M_m + B_ψ within
/// 1e-12·max(1, |Ã_m|).
CorrelationForms correlation_convert(const EstimateAssignment& estimates,
                                     const std::vector<double>& m_values, double gauge,
                                     const std::vector<double>& p_m);

} // namespace qmeas
