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

#include "qmeas/quasiprob.hpp"

#include <algorithm>
#include <cmath>

#include "qmeas/error.hpp"
#include "qmeas/error_analysis.hpp"

namespace qmeas {

namespace {

void check_dims(const Observable& obs, const Povm& povm, const State& psi) {
    if (obs.dim() != psi.dim() || povm.dim() != psi.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "observable, measurement and state must share a dimension");
    }
}

double max_diff(const RMatrix& x, const RMatrix& y) { return (x - y).cwiseAbs().maxCoeff(); }

} // namespace

double DiracTable::max_imag() const {
    return entries.size() == 0 ? 0.0 : entries.imag().cwiseAbs().maxCoeff();
}

DiracTable dirac_distribution(const Observable& obs, const Povm& povm, const State& psi) {
    check_dims(obs, povm, psi);
    const CVector& v = psi.amplitudes();
    DiracTable t;
    t.entries.resize(static_cast<Eigen::Index>(obs.num_outcomes()),
                     static_cast<Eigen::Index>(povm.size()));
    for (std::size_t a = 0; a < obs.num_outcomes(); ++a) {
        const CVector pa = obs.projector(a) * v;
        for (std::size_t m = 0; m < povm.size(); ++m) {
            // factored form ⟨ψ|m⟩⟨m|Π_aψ⟩ keeps relative precision at small overlaps
            const auto& r1 = povm.rank_one(m);
            t.entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(m)) =
                r1 ? r1->scale * v.dot(r1->vector) * r1->vector.dot(pa) : v.dot(povm.element(m) * pa);
        }
    }
    return t;
}

JointWeightTable joint_weights(const Observable& obs, const Povm& povm, const State& psi,
                               const Tolerances& tol) {
    const DiracTable dirac = dirac_distribution(obs, povm, psi);
    JointWeightTable w;
    w.weights = dirac.entries.real();
    w.marginal_m.resize(static_cast<Eigen::Index>(povm.size()));
    w.marginal_a.resize(static_cast<Eigen::Index>(obs.num_outcomes()));
    // Marginals are taken from the Born/POVM rules rather than from the table
    // so that the row and column sums below are a genuine cross-check.
    for (std::size_t m = 0; m < povm.size(); ++m) {
        const auto& r1 = povm.rank_one(m);
        w.marginal_m[static_cast<Eigen::Index>(m)] =
            r1 ? r1->scale * std::norm(r1->vector.dot(psi.amplitudes()))
               : povm_probability(povm.element(m), psi, tol).value;
    }
    for (std::size_t a = 0; a < obs.num_outcomes(); ++a) {
        w.marginal_a[static_cast<Eigen::Index>(a)] = born_probability(obs, a, psi, tol).value;
    }
    const double col_defect = (w.weights.colwise().sum().transpose() - w.marginal_m).cwiseAbs().maxCoeff();
    const double row_defect = (w.weights.rowwise().sum() - w.marginal_a).cwiseAbs().maxCoeff();
    if (col_defect > tol.marginal_tol || row_defect > tol.marginal_tol) {
        throw Error(ErrorCode::MarginalMismatch,
                    "joint weight sums deviate from marginals by " +
                        std::to_string(std::max(col_defect, row_defect)));
    }
    return w;
}

namespace {

RMatrix fd_table(const Observable& obs, const Povm& povm, const State& psi,
                 const EstimateAssignment& estimates, double h) {
    const auto na = obs.num_outcomes();
    const auto nm = povm.size();
    RMatrix table(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(nm));

    auto error_at = [&](std::size_t a, double da, std::size_t m, double dm) {
        CMatrix target = CMatrix::Zero(obs.matrix().rows(), obs.matrix().cols());
        for (std::size_t b = 0; b < na; ++b) {
            target += (obs.value(b) + (b == a ? da : 0.0)) * obs.projector(b);
        }
        EstimateAssignment shifted = estimates;
        shifted.values[m] += dm;
        return ozawa_error(target, povm, shifted, psi).total;
    };

    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t m = 0; m < nm; ++m) {
            const double mixed = (error_at(a, h, m, h) - error_at(a, h, m, -h) -
                                  error_at(a, -h, m, h) + error_at(a, -h, m, -h)) /
                                 (4.0 * h * h);
            table(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(m)) = -0.5 * mixed;
        }
    }
    return table;
}

} // namespace

JointWeightTable joint_weights_fd_oracle(const Observable& obs, const Povm& povm,
                                         const State& psi, const EstimateAssignment& estimates,
                                         double step, const Tolerances& tol) {
    check_dims(obs, povm, psi);
    if (!(step > 0.0)) throw Error(ErrorCode::StepTooSmall, "step must be positive");
    if (!obs.nondegenerate()) {
        throw Error(ErrorCode::DegenerateTarget,
                    "eigenvalues of a degenerate group cannot be perturbed independently");
    }
    if (estimates.size() != povm.size()) {
        throw Error(ErrorCode::ShapeMismatch, "one estimate per outcome is required");
    }
    JointWeightTable w;
    w.weights = fd_table(obs, povm, psi, estimates, step);
    const RMatrix refined = fd_table(obs, povm, psi, estimates, 0.5 * step);
    const double drift = max_diff(w.weights, refined);
    if (!(drift <= tol.oracle_tol)) {
        throw Error(ErrorCode::StepTooSmall,
                    "finite-difference table changes by " + std::to_string(drift) +
                        " when the step is halved");
    }
    w.marginal_m = w.weights.colwise().sum().transpose();
    w.marginal_a = w.weights.rowwise().sum();
    return w;
}

double conditional_prob_eigenstate(const CMatrix& element, const Observable& obs, std::size_t a) {
    if (a >= obs.num_outcomes()) {
        throw Error(ErrorCode::IndexOutOfRange, "outcome group " + std::to_string(a));
    }
    if (element.rows() != obs.matrix().rows()) {
        throw Error(ErrorCode::DimensionMismatch, "element and observable dimensions differ");
    }
    const CMatrix& p = obs.projector(a);
    return (p * element).trace().real() / p.trace().real();
}

JointWeightTable sequential_joint(const Povm& povm, const Observable& obs, const State& psi,
                                  const Tolerances& tol) {
    check_dims(obs, povm, psi);
    const double limit = tol.comm_tol * std::max(max_abs(obs.matrix()), 1e-300);
    for (std::size_t m = 0; m < povm.size(); ++m) {
        const double defect = commutator_defect(povm.element(m), obs.matrix());
        if (defect > limit) {
            throw Error(ErrorCode::NotCommuting, "POVM element " + std::to_string(m) +
                                                     " has commutator defect " +
                                                     std::to_string(defect));
        }
    }
    JointWeightTable w;
    w.weights.resize(static_cast<Eigen::Index>(obs.num_outcomes()),
                     static_cast<Eigen::Index>(povm.size()));
    w.marginal_a.resize(w.weights.rows());
    for (std::size_t a = 0; a < obs.num_outcomes(); ++a) {
        const double pa = born_probability(obs, a, psi, tol).value;
        w.marginal_a[static_cast<Eigen::Index>(a)] = pa;
        for (std::size_t m = 0; m < povm.size(); ++m) {
            // Lüders update; reduces to ⟨a|E|a⟩ P(a) for nondegenerate groups
            const CMatrix& pi = obs.projector(a);
            w.weights(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(m)) =
                sandwich(psi.amplitudes(), pi * povm.element(m) * pi, psi.amplitudes()).real();
        }
    }
    w.marginal_m = w.weights.colwise().sum().transpose();
    return w;
}

} // namespace qmeas
