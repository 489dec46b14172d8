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

#include "qmeas/errorfree.hpp"

#include <algorithm>
#include <cmath>

#include "qmeas/error.hpp"

namespace qmeas {

namespace {

void check_rank_one(const Povm& povm) {
    for (std::size_t m = 0; m < povm.size(); ++m) {
        if (!povm.rank_one(m)) {
            throw Error(ErrorCode::NotRankOne,
                        "element " + std::to_string(m) +
                            " is not of the form λ|m⟩⟨m|; error-free analysis needs rank-one elements");
        }
    }
}

} // namespace

Complex weak_value(const Observable& obs, const State& psi, const CVector& m,
                   double overlap_floor) {
    if (obs.dim() != psi.dim() || static_cast<std::size_t>(m.size()) != psi.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "weak value operands differ in dimension");
    }
    const Complex overlap = m.dot(psi.amplitudes());
    if (std::abs(overlap) <= overlap_floor) {
        throw Error(ErrorCode::VanishingOverlap, "post-selected vector is orthogonal to the state");
    }
    return m.dot(obs.matrix() * psi.amplitudes()) / overlap;
}

WeakValueTable weak_values(const Observable& obs, const Povm& povm, const State& psi,
                           double overlap_floor) {
    check_rank_one(povm);
    WeakValueTable t;
    t.values.resize(povm.size());
    for (std::size_t m = 0; m < povm.size(); ++m) {
        const CVector& v = povm.rank_one(m)->vector;
        if (std::abs(v.dot(psi.amplitudes())) <= overlap_floor) {
            t.undefined_outcomes.push_back(m);
            continue;
        }
        t.values[m] = weak_value(obs, psi, v, overlap_floor);
        t.max_imag = std::max(t.max_imag, std::abs(t.values[m].imag()));
    }
    return t;
}

Certification certify_error_free(const Observable& obs, const Povm& povm, const State& psi,
                                 double tol, double overlap_floor) {
    if (obs.dim() != psi.dim() || povm.dim() != psi.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "observable, measurement and state must share a dimension");
    }
    const WeakValueTable wv = weak_values(obs, povm, psi, overlap_floor);
    const double mean = expectation(obs.matrix(), psi);
    const CVector a_psi = obs.matrix() * psi.amplitudes();

    Certification c;
    c.max_imag = wv.max_imag;
    c.undefined_outcomes = wv.undefined_outcomes;
    c.estimates.values.resize(povm.size());
    for (std::size_t m = 0; m < povm.size(); ++m) c.estimates.values[m] = wv.values[m].real();
    for (std::size_t m : wv.undefined_outcomes) {
        c.estimates.values[m] = mean;
        c.undefined_leak = std::max(c.undefined_leak, std::abs(povm.rank_one(m)->vector.dot(a_psi)));
    }
    c.error_free = c.max_imag <= tol &&
                   c.undefined_leak <= tol * std::max(1.0, max_abs(obs.matrix()));
    return c;
}

DiracReality dirac_reality_check(const Observable& obs, const Povm& povm, const State& psi,
                                 double tol) {
    DiracReality r;
    r.max_imag_entry = dirac_distribution(obs, povm, psi).max_imag();
    r.real_dirac = r.max_imag_entry <= tol;
    return r;
}

Decomposition decompose(const Observable& obs, const ProjectiveBasis& basis, const State& psi,
                        std::optional<double> gauge, const Tolerances& tol) {
    const Povm povm = Povm::from_basis(basis);
    const Certification cert = certify_error_free(obs, povm, psi, tol.certify_tol, tol.overlap_floor);
    if (!cert.error_free) {
        throw Error(ErrorCode::NotErrorFree,
                    "weak values are not real (max |Im| = " + std::to_string(cert.max_imag) + ")");
    }

    Decomposition d;
    d.gauge = gauge.value_or(expectation(obs.matrix(), psi));
    d.a_estimates = cert.estimates;
    const auto n = static_cast<Eigen::Index>(basis.dim());
    d.m_matrix = CMatrix::Zero(n, n);
    for (std::size_t m = 0; m < basis.size(); ++m) {
        const double mm = d.a_estimates[m] - d.gauge;
        d.m_values.push_back(mm);
        const CVector v = basis.vector(m);
        d.m_matrix += mm * (v * v.adjoint());
    }
    d.b_matrix = obs.matrix() - d.m_matrix;
    d.eigenstate_defect = (d.b_matrix * psi.amplitudes() - d.gauge * psi.amplitudes()).norm();

    const JointWeightTable w = joint_weights(obs, povm, psi, tol);
    d.reverse_estimates.assign(w.num_a(), 0.0);
    for (std::size_t a = 0; a < w.num_a(); ++a) {
        const double pa = w.marginal_a[static_cast<Eigen::Index>(a)];
        if (pa <= tol.prob_floor) {
            d.zero_probability_a.push_back(a);
            continue;
        }
        double acc = 0.0;
        for (std::size_t m = 0; m < w.num_m(); ++m) {
            acc += d.m_values[m] * w.weights(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(m));
        }
        d.reverse_estimates[a] = acc / pa;
    }
    return d;
}

std::vector<double> transform_A_to_M(const std::vector<double>& a_values, double gauge,
                                     const JointWeightTable& w, double prob_floor) {
    if (a_values.size() != w.num_a()) {
        throw Error(ErrorCode::ShapeMismatch, "eigenvalues do not match the weight table");
    }
    std::vector<double> out(w.num_m());
    for (std::size_t m = 0; m < w.num_m(); ++m) {
        const double pm = w.marginal_m[static_cast<Eigen::Index>(m)];
        if (pm <= prob_floor) {
            throw Error(ErrorCode::ZeroMarginal, "outcome m=" + std::to_string(m) + " has probability " +
                                                     std::to_string(pm));
        }
        double acc = 0.0;
        for (std::size_t a = 0; a < w.num_a(); ++a) {
            acc += (a_values[a] - gauge) * w.weights(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(m));
        }
        out[m] = acc / pm;
    }
    return out;
}

std::vector<double> reverse_estimates(const std::vector<double>& m_values,
                                      const JointWeightTable& w, double prob_floor) {
    return transform_M_to_A(m_values, 0.0, w, prob_floor);
}

std::vector<double> transform_M_to_A(const std::vector<double>& m_values, double gauge,
                                     const JointWeightTable& w, double prob_floor) {
    if (m_values.size() != w.num_m()) {
        throw Error(ErrorCode::ShapeMismatch, "M eigenvalues do not match the weight table");
    }
    std::vector<double> out(w.num_a());
    for (std::size_t a = 0; a < w.num_a(); ++a) {
        const double pa = w.marginal_a[static_cast<Eigen::Index>(a)];
        if (pa <= prob_floor) {
            throw Error(ErrorCode::ZeroMarginal, "outcome a=" + std::to_string(a) + " has probability " +
                                                     std::to_string(pa));
        }
        double acc = 0.0;
        for (std::size_t m = 0; m < w.num_m(); ++m) {
            acc += (m_values[m] + gauge) * w.weights(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(m));
        }
        out[a] = acc / pa;
    }
    return out;
}

} // namespace qmeas
