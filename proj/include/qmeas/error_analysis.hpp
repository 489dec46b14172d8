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
#include <vector>

#include "qmeas/quantum_objects.hpp"
#include "qmeas/quasiprob.hpp"

namespace qmeas {

/// Ozawa error ε²(A) split into the contribution of each outcome m.
struct ErrorReport {
    double total = 0.0;
    std::vector<double> per_outcome;
    EstimateAssignment estimates_used;
};

/// Ã_m·I − Â
CMatrix error_operator(double estimate, const Observable& obs);

/// Σ_m ⟨ψ|(Ã_m − Â)Ê_m(Ã_m − Â)|ψ⟩.
ErrorReport ozawa_error(const Observable& obs, const Povm& povm,
                        const EstimateAssignment& estimates, const State& psi);

/// Same as above for a raw Hermitian target matrix.
ErrorReport ozawa_error(const CMatrix& target, const Povm& povm,
                        const EstimateAssignment& estimates, const State& psi);

/// Σ_{m,a} (Ã_m − A_a)² P(a,m|ψ).
double error_from_weights(const std::vector<double>& a_values,
                          const EstimateAssignment& estimates, const JointWeightTable& w);

enum class ZeroProbPolicy {
    Skip,        // value left at 0 and flagged
    AssignZero,  // value 0, flagged
    AssignMean,  // value ⟨Â⟩_ψ, flagged
};

struct OptimalEstimates {
    EstimateAssignment estimates;
    /// Outcomes whose probability was at or below the floor.
    std::vector<std::size_t> flagged;
    ZeroProbPolicy policy = ZeroProbPolicy::Skip;
};

/// Conditional averages Ã_m = Σ_a A_a P(a,m|ψ)/P(m|ψ). `mean` is ⟨Â⟩_ψ,
/// used only by ZeroProbPolicy::AssignMean. Throws AllOutcomesZero when no
/// outcome is above prob_floor.
OptimalEstimates optimal_estimates(const std::vector<double>& a_values, const JointWeightTable& w,
                                   ZeroProbPolicy policy = ZeroProbPolicy::Skip,
                                   double prob_floor = 1e-12, double mean = 0.0);

} // namespace qmeas
