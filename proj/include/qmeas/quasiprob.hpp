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

#include "qmeas/quantum_objects.hpp"

namespace qmeas {

/// Complex table ⟨ψ|Ê_m Π_a|ψ⟩, rows indexed by spectral group a (ascending
/// eigenvalue), columns by measurement outcome m.
struct DiracTable {
    CMatrix entries;

    std::size_t num_a() const { return static_cast<std::size_t>(entries.rows()); }
    std::size_t num_m() const { return static_cast<std::size_t>(entries.cols()); }
    double max_imag() const;
};

/// Real joint statistical weights P(a,m|ψ) with their marginals. Entries may
/// be negative.
struct JointWeightTable {
    RMatrix weights;   // (a, m)
    RVector marginal_m;
    RVector marginal_a;

    std::size_t num_a() const { return static_cast<std::size_t>(weights.rows()); }
    std::size_t num_m() const { return static_cast<std::size_t>(weights.cols()); }
    double min_weight() const { return weights.minCoeff(); }
};

DiracTable dirac_distribution(const Observable& obs, const Povm& povm, const State& psi);

/// Real part of the Dirac table. Marginals come from the Born and POVM
/// probability rules and must match the row and column sums within
/// tol.marginal_tol (MarginalMismatch otherwise).
JointWeightTable joint_weights(const Observable& obs, const Povm& povm, const State& psi,
                               const Tolerances& tol = {});

/// Joint weights recovered as −½ ∂²ε²/∂A_a∂Ã_m by central differences of the
/// operator-form error, with the target eigenvalues and the estimates
/// perturbed by ±step. The result is recomputed at step/2 and StepTooSmall is
/// thrown when the two disagree by more than tol.oracle_tol. Requires a
/// nondegenerate target (DegenerateTarget).
JointWeightTable joint_weights_fd_oracle(const Observable& obs, const Povm& povm,
                                         const State& psi, const EstimateAssignment& estimates,
                                         double step, const Tolerances& tol = {});

/// P(m|a)·P(a|ψ) for a POVM commuting with the target (NotCommuting otherwise).
JointWeightTable sequential_joint(const Povm& povm, const Observable& obs, const State& psi,
                                  const Tolerances& tol = {});

/// Tr(Π_a Ê)/Tr(Π_a), i.e. ⟨a|Ê|a⟩ for a nondegenerate group.
double conditional_prob_eigenstate(const CMatrix& element, const Observable& obs, std::size_t a);

} // namespace qmeas
