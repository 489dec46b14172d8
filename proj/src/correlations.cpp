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

#include "qmeas/correlations.hpp"

#include <algorithm>
#include <cmath>

#include "qmeas/error.hpp"

namespace qmeas {

CorrelationReport correlation_report(const Decomposition& d, const Observable& obs,
                                     const JointWeightTable& w, const State& psi) {
    if (d.m_values.size() != w.num_m() || d.a_estimates.size() != w.num_m() ||
        obs.num_outcomes() != w.num_a() || d.reverse_estimates.size() != w.num_a()) {
        throw Error(ErrorCode::ShapeMismatch, "decomposition does not match the weight table");
    }
    if (obs.dim() != psi.dim() || static_cast<std::size_t>(d.m_matrix.rows()) != psi.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "operators and state differ in dimension");
    }
    CorrelationReport r;
    for (std::size_t m = 0; m < w.num_m(); ++m) {
        r.via_m_context += d.a_estimates[m] * d.m_values[m] * w.marginal_m[static_cast<Eigen::Index>(m)];
    }
    for (std::size_t a = 0; a < w.num_a(); ++a) {
        r.via_a_context += obs.value(a) * d.reverse_estimates[a] * w.marginal_a[static_cast<Eigen::Index>(a)];
        for (std::size_t m = 0; m < w.num_m(); ++m) {
            r.via_weights += obs.value(a) * d.m_values[m] *
                             w.weights(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(m));
        }
    }
    const CVector& v = psi.amplitudes();
    r.via_operator = v.dot(d.m_matrix * (obs.matrix() * v));
    r.via_operator_reversed = v.dot(obs.matrix() * (d.m_matrix * v));
    r.imag_operator = std::abs(r.via_operator.imag());

    const double mean_a = expectation(obs.matrix(), psi);
    const double mean_a2 = (obs.matrix() * v).squaredNorm();
    const double mean_m = expectation(d.m_matrix, psi);
    const double mean_m2 = (d.m_matrix * v).squaredNorm();
    r.via_A_moments = mean_a2 - d.gauge * mean_a;
    r.via_M_moments = mean_m2 + d.gauge * mean_m;

    const double routes[] = {r.via_m_context, r.via_a_context, r.via_weights,
                             r.via_operator.real(), r.via_A_moments, r.via_M_moments};
    const auto [lo, hi] = std::minmax_element(std::begin(routes), std::end(routes));
    r.max_spread = *hi - *lo;
    return r;
}

CorrelationMoments correlation_moments(const Observable& obs, const CMatrix& m_op, double gauge,
                                       const State& psi, double decomposition_tol) {
    if (obs.dim() != psi.dim() || static_cast<std::size_t>(m_op.rows()) != psi.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "operators and state differ in dimension");
    }
    const CVector& v = psi.amplitudes();
    const double defect = ((obs.matrix() - m_op) * v - gauge * v).norm();
    if (defect > decomposition_tol) {
        throw Error(ErrorCode::PreconditionViolated,
                    "state is not an eigenvector of Â − M̂ (defect " + std::to_string(defect) + ")");
    }
    CorrelationMoments out;
    out.from_A = (obs.matrix() * v).squaredNorm() - gauge * expectation(obs.matrix(), psi);
    out.from_M = (m_op * v).squaredNorm() + gauge * expectation(m_op, psi);
    return out;
}

CorrelationForms correlation_convert(const EstimateAssignment& estimates,
                                     const std::vector<double>& m_values, double gauge,
                                     const std::vector<double>& p_m) {
    if (estimates.size() != m_values.size() || estimates.size() != p_m.size()) {
        throw Error(ErrorCode::ShapeMismatch, "estimates, M values and probabilities differ in length");
    }
    CorrelationForms f;
    for (std::size_t m = 0; m < p_m.size(); ++m) {
        const double est = estimates[m];
        const double mm = m_values[m];
        if (std::abs(est - (mm + gauge)) > 1e-12 * std::max(1.0, std::abs(est))) {
            throw Error(ErrorCode::EstimateIdentityViolated,
                        "estimate " + std::to_string(m) + " differs from M_m + B_ψ");
        }
        f.form1 += est * mm * p_m[m];
        f.form2 += (mm + gauge) * mm * p_m[m];
        f.form3 += est * (est - gauge) * p_m[m];
    }
    return f;
}

} // namespace qmeas
