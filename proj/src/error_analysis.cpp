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

#include "qmeas/error_analysis.hpp"

#include "qmeas/error.hpp"

namespace qmeas {

CMatrix error_operator(double estimate, const Observable& obs) {
    const auto d = obs.matrix().rows();
    return estimate * CMatrix::Identity(d, d) - obs.matrix();
}

ErrorReport ozawa_error(const CMatrix& target, const Povm& povm,
                        const EstimateAssignment& estimates, const State& psi) {
    if (static_cast<std::size_t>(target.rows()) != psi.dim() || povm.dim() != psi.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "observable, measurement and state must share a dimension");
    }
    if (estimates.size() != povm.size()) {
        throw Error(ErrorCode::DimensionMismatch, "one estimate per outcome is required");
    }
    const CVector& v = psi.amplitudes();
    const CVector target_psi = target * v;
    ErrorReport r;
    r.estimates_used = estimates;
    r.per_outcome.reserve(povm.size());
    for (std::size_t m = 0; m < povm.size(); ++m) {
        const CVector eps_psi = estimates[m] * v - target_psi;
        const CMatrix& e = povm.element(m);
        double c = 0.0;
        if (const auto& r1 = povm.rank_one(m)) {
            // λ|⟨m|ε̂ψ⟩|² keeps exact zeros at round-off squared; the residual
            // covers whatever part of Ê_m the rank-one form leaves out
            const CMatrix residual = e - r1->scale * outer(r1->vector, r1->vector);
            c = r1->scale * std::norm(r1->vector.dot(eps_psi)) +
                eps_psi.dot(residual * eps_psi).real();
        } else {
            c = eps_psi.dot(e * eps_psi).real();
        }
        r.per_outcome.push_back(c);
        r.total += c;
    }
    return r;
}

ErrorReport ozawa_error(const Observable& obs, const Povm& povm,
                        const EstimateAssignment& estimates, const State& psi) {
    return ozawa_error(obs.matrix(), povm, estimates, psi);
}

double error_from_weights(const std::vector<double>& a_values,
                          const EstimateAssignment& estimates, const JointWeightTable& w) {
    if (a_values.size() != w.num_a() || estimates.size() != w.num_m()) {
        throw Error(ErrorCode::ShapeMismatch, "eigenvalues/estimates do not match the weight table");
    }
    double total = 0.0;
    for (std::size_t m = 0; m < w.num_m(); ++m) {
        for (std::size_t a = 0; a < w.num_a(); ++a) {
            const double diff = estimates[m] - a_values[a];
            total += diff * diff * w.weights(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(m));
        }
    }
    return total;
}

OptimalEstimates optimal_estimates(const std::vector<double>& a_values, const JointWeightTable& w,
                                   ZeroProbPolicy policy, double prob_floor, double mean) {
    if (a_values.size() != w.num_a()) {
        throw Error(ErrorCode::ShapeMismatch, "eigenvalues do not match the weight table");
    }
    OptimalEstimates out;
    out.policy = policy;
    out.estimates.values.assign(w.num_m(), 0.0);
    for (std::size_t m = 0; m < w.num_m(); ++m) {
        const double pm = w.marginal_m[static_cast<Eigen::Index>(m)];
        if (pm <= prob_floor) {
            out.flagged.push_back(m);
            if (policy == ZeroProbPolicy::AssignMean) out.estimates.values[m] = mean;
            continue;
        }
        double acc = 0.0;
        for (std::size_t a = 0; a < w.num_a(); ++a) {
            acc += a_values[a] * w.weights(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(m));
        }
        out.estimates.values[m] = acc / pm;
    }
    if (out.flagged.size() == w.num_m()) {
        throw Error(ErrorCode::AllOutcomesZero, "every outcome has vanishing probability");
    }
    return out;
}

} // namespace qmeas
