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

#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "qmeas/error_analysis.hpp"
#include "qmeas/errorfree.hpp"
#include "qmeas/quasiprob.hpp"
#include "test_support.hpp"

using namespace qmeas;
using namespace qmeas::testing;
using Catch::Approx;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

struct RealCase {
    ScenarioModel model;
    ProjectiveBasis basis;
};

RealCase real_case(std::uint64_t seed) {
    ScenarioModel model = build_model(generate_real_scenario(2 + seed % 5, seed));
    ProjectiveBasis basis = *measurement_basis(model);
    return {std::move(model), std::move(basis)};
}

// Trine: three real unit vectors at 120°, each weighted by 2/3.
Povm trine() {
    std::vector<CMatrix> elems;
    for (int k = 0; k < 3; ++k) {
        const double t = 2.0 * std::numbers::pi * k / 3.0;
        const CVector v = vec2(std::cos(t), std::sin(t));
        elems.push_back(2.0 / 3.0 * v * v.adjoint());
    }
    return validate_povm(elems);
}

} // namespace

TEST_CASE("weak values", "[errorfree]") {
    S1 s;
    CHECK(weak_value(s.obs, s.psi, s.basis.vector(S1::kMinusX)).real() == Approx(kSqrt2 + 1).margin(1e-12));
    CHECK(std::abs(weak_value(s.obs, s.psi, s.basis.vector(S1::kMinusX)).imag()) <= 1e-15);
    CHECK(weak_value(s.obs, s.psi, s.basis.vector(S1::kPlusX)).real() == Approx(kSqrt2 - 1).margin(1e-12));

    // eigenstate: any non-orthogonal post-selection returns the eigenvalue
    const State down = make_state(vec2(0, 1));
    CHECK(std::abs(weak_value(s.obs, down, s.basis.vector(0)) - Complex(-1.0)) <= 1e-15);

    // ⟨m|σ_z|+x⟩/⟨m|+x⟩ = (1 + i)/(1 − i) = i for m = (1, i)/√2
    const double r = 1.0 / kSqrt2;
    const State plus = make_state(vec2(r, r));
    CHECK(std::abs(weak_value(s.obs, plus, vec2(r, Complex(0, r))) - Complex(0, 1)) <= 1e-12);
    CHECK(std::abs(weak_value(s.obs, plus, vec2(r, Complex(0, -r))) - Complex(0, -1)) <= 1e-12);

    CHECK(code_of([&] { weak_value(s.obs, down, vec2(1, 0)); }) == ErrorCode::VanishingOverlap);
}

TEST_CASE("weak value table", "[errorfree]") {
    S1 s;
    const WeakValueTable t = weak_values(s.obs, s.povm, s.psi);
    REQUIRE(t.values.size() == 2);
    CHECK(t.max_imag <= 1e-15);
    CHECK(t.undefined_outcomes.empty());

    const Povm grouped = validate_povm({CMatrix::Identity(2, 2)});
    CHECK(code_of([&] { weak_values(s.obs, grouped, s.psi); }) == ErrorCode::NotRankOne);
}

TEST_CASE("certification on fixed scenarios", "[errorfree]") {
    S1 s;
    const Certification c = certify_error_free(s.obs, s.povm, s.psi);
    CHECK(c.error_free);
    CHECK(c.estimates.values[S1::kPlusX] == Approx(kSqrt2 - 1).margin(1e-12));
    CHECK(c.estimates.values[S1::kMinusX] == Approx(kSqrt2 + 1).margin(1e-12));
    // the anomalous estimate comes with a negative weight
    CHECK(c.estimates.values[S1::kMinusX] > 1.0);
    CHECK(joint_weights(s.obs, s.povm, s.psi).min_weight() < 0.0);

    const double r = 1.0 / kSqrt2;
    const State plus = make_state(vec2(r, r));
    const Certification y = certify_error_free(s.obs, Povm::from_basis(ProjectiveBasis(y_basis())), plus);
    CHECK_FALSE(y.error_free);
    CHECK(y.max_imag == Approx(1.0).margin(1e-12));

    const Povm eig = Povm::from_basis(ProjectiveBasis(CMatrix::Identity(2, 2)));
    const Certification e = certify_error_free(s.obs, eig, s.psi);
    CHECK(e.error_free);
    CHECK(e.estimates.values[0] == Approx(1.0));
    CHECK(e.estimates.values[1] == Approx(-1.0));

    CHECK(code_of([&] { certify_error_free(s.obs, validate_povm({CMatrix::Identity(2, 2)}), s.psi); }) ==
          ErrorCode::NotRankOne);
}

TEST_CASE("certification of a scaled rank-one POVM", "[errorfree]") {
    S1 s;
    const Povm p = trine();
    const Certification c = certify_error_free(s.obs, p, s.psi);
    CHECK(c.error_free);
    CHECK(ozawa_error(s.obs, p, c.estimates, s.psi).total <= 1e-20);
}

TEST_CASE("certification with outcomes of zero overlap", "[errorfree]") {
    const Povm comp = Povm::from_basis(ProjectiveBasis(CMatrix::Identity(2, 2)));
    const State up = make_state(vec2(1, 0));

    // σ_z|0⟩ has no component along |1⟩: the outcome is harmless
    const Certification ok = certify_error_free(Observable(pauli_z()), comp, up);
    CHECK(ok.error_free);
    CHECK(ok.undefined_outcomes == std::vector<std::size_t>{1});
    CHECK(ok.estimates.values[1] == Approx(1.0));

    // σ_x|0⟩ = |1⟩: the never-observed outcome still carries error
    const Observable x(pauli_x());
    const Certification bad = certify_error_free(x, comp, up);
    CHECK_FALSE(bad.error_free);
    CHECK(bad.undefined_leak == Approx(1.0));
    CHECK(ozawa_error(x, comp, bad.estimates, up).total >= 1.0 - 1e-12);
}

TEST_CASE("Dirac reality check", "[errorfree]") {
    S1 s;
    const DiracReality d = dirac_reality_check(s.obs, s.povm, s.psi);
    CHECK(d.real_dirac);
    CHECK(d.max_imag_entry <= 1e-15);

    const double r = 1.0 / kSqrt2;
    const DiracReality y =
        dirac_reality_check(s.obs, Povm::from_basis(ProjectiveBasis(y_basis())), make_state(vec2(r, r)));
    CHECK_FALSE(y.real_dirac);
    CHECK(y.max_imag_entry == Approx(0.25));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const RealCase rc = real_case(seed);
        CHECK(dirac_reality_check(rc.model.observable, rc.model.povm, rc.model.state).real_dirac);
    }
}

TEST_CASE("decomposition of S1", "[errorfree]") {
    S1 s;
    const Decomposition d = decompose(s.obs, s.basis, s.psi);
    CHECK(d.gauge == Approx(kSqrt2 / 2).margin(1e-12));
    CHECK(d.m_values[S1::kPlusX] == Approx(kSqrt2 / 2 - 1).margin(1e-12));
    CHECK(d.m_values[S1::kMinusX] == Approx(kSqrt2 / 2 + 1).margin(1e-12));
    CHECK(d.eigenstate_defect <= 1e-12);
    CHECK(std::abs(expectation(d.m_matrix, s.psi)) <= 1e-12);
    CHECK(max_abs(d.b_matrix + d.m_matrix - s.obs.matrix()) <= 1e-14);
    for (std::size_t m = 0; m < 2; ++m) CHECK(d.a_estimates.values[m] == Approx(d.m_values[m] + d.gauge).epsilon(0));

    // reverse estimates per a group, ascending: a = −1 then a = +1
    CHECK(d.reverse_estimates[S1::kMinus] == Approx(-(1 + kSqrt2 / 2)).margin(1e-12));
    CHECK(d.reverse_estimates[S1::kPlus] == Approx(1 - kSqrt2 / 2).margin(1e-12));

    // M̂ is diagonal in the measurement basis
    const CMatrix in_basis = s.basis.vectors().adjoint() * d.m_matrix * s.basis.vectors();
    CHECK(std::abs(in_basis(0, 1)) <= 1e-12);
    CHECK(std::abs(in_basis(1, 0)) <= 1e-12);

    const Decomposition zero = decompose(s.obs, s.basis, s.psi, 0.0);
    CHECK(zero.m_values[S1::kPlusX] == Approx(kSqrt2 - 1).margin(1e-12));
    CHECK(zero.m_values[S1::kMinusX] == Approx(kSqrt2 + 1).margin(1e-12));
    CHECK((zero.b_matrix * s.psi.amplitudes()).norm() <= 1e-12);
}

TEST_CASE("decomposition in the eigenbasis is trivial", "[errorfree]") {
    S1 s;
    const ProjectiveBasis eig(CMatrix::Identity(2, 2));
    const Decomposition d = decompose(s.obs, eig, s.psi, 0.0);
    CHECK(max_abs(d.m_matrix - s.obs.matrix()) <= 1e-15);
    CHECK(max_abs(d.b_matrix) <= 1e-15);
    CHECK(d.eigenstate_defect <= 1e-15);
}

TEST_CASE("decomposition requires certification", "[errorfree]") {
    const double r = 1.0 / kSqrt2;
    CHECK(code_of([&] {
              decompose(Observable(pauli_z()), ProjectiveBasis(y_basis()), make_state(vec2(r, r)));
          }) == ErrorCode::NotErrorFree);
}

TEST_CASE("eigenvalue context transforms on S1", "[errorfree]") {
    S1 s;
    const JointWeightTable w = joint_weights(s.obs, s.povm, s.psi);
    const auto av = s.obs.values();
    const auto m_vals = transform_A_to_M(av, kSqrt2 / 2, w);
    CHECK(m_vals[S1::kPlusX] == Approx(-0.292893).margin(1e-6));
    CHECK(m_vals[S1::kMinusX] == Approx(1.707107).margin(1e-6));
    const auto m0 = transform_A_to_M(av, 0.0, w);
    CHECK(m0[S1::kPlusX] == Approx(kSqrt2 - 1).margin(1e-12));
    CHECK(m0[S1::kMinusX] == Approx(kSqrt2 + 1).margin(1e-12));

    const auto rev = reverse_estimates(m_vals, w);
    CHECK(rev[S1::kPlus] == Approx(0.292893).margin(1e-6));
    CHECK(rev[S1::kMinus] == Approx(-1.707107).margin(1e-6));

    const auto back = transform_M_to_A(m_vals, kSqrt2 / 2, w);
    CHECK(back[S1::kPlus] == Approx(1.0).margin(1e-12));
    CHECK(back[S1::kMinus] == Approx(-1.0).margin(1e-12));

    // same sum M_m + B_ψ gives the same eigenvalues
    std::vector<double> shifted = m_vals;
    for (double& v : shifted) v -= 3.0;
    CHECK(max_diff(transform_M_to_A(shifted, kSqrt2 / 2 + 3.0, w), back) <= 1e-12);
}

TEST_CASE("transforms under a perfect measurement", "[errorfree]") {
    const Observable z(pauli_z());
    const Povm p = Povm::from_basis(ProjectiveBasis(CMatrix::Identity(2, 2)));
    const JointWeightTable w = joint_weights(z, p, s1_state());
    // outcome 0 is |0⟩ (a = +1), outcome 1 is |1⟩ (a = −1)
    const auto m = transform_A_to_M(z.values(), 0.0, w);
    CHECK(m[0] == Approx(1.0));
    CHECK(m[1] == Approx(-1.0));
    const auto a = transform_M_to_A(m, 0.0, w);
    CHECK(max_diff(a, z.values()) <= 1e-12);
}

TEST_CASE("transforms reject zero marginals", "[errorfree]") {
    const Observable z(pauli_z());
    const Povm p = Povm::from_basis(ProjectiveBasis(CMatrix::Identity(2, 2)));
    const JointWeightTable w = joint_weights(z, p, make_state(vec2(1, 0)));
    CHECK(code_of([&] { transform_A_to_M(z.values(), 0.0, w); }) == ErrorCode::ZeroMarginal);
    CHECK(code_of([&] { reverse_estimates({1.0, -1.0}, w); }) == ErrorCode::ZeroMarginal);
    CHECK(code_of([&] { transform_M_to_A({1.0, -1.0}, 0.0, w); }) == ErrorCode::ZeroMarginal);
}

TEST_CASE("real-coefficient scenarios are error free", "[errorfree][property]") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const RealCase rc = real_case(seed);
        const auto& [model, basis] = rc;
        const auto& obs = model.observable;
        const double scale = std::max(1.0, max_abs(obs.matrix()) * max_abs(obs.matrix()));

        const Certification c = certify_error_free(obs, model.povm, model.state);
        CHECK(c.error_free);
        CHECK(ozawa_error(obs, model.povm, c.estimates, model.state).total <= 1e-18 * scale);

        const Decomposition d = decompose(obs, basis, model.state);
        CHECK(d.eigenstate_defect <= 1e-9);
        CHECK(max_abs(d.b_matrix + d.m_matrix - obs.matrix()) <= 1e-14);
        const CMatrix in_basis = basis.vectors().adjoint() * d.m_matrix * basis.vectors();
        CHECK(max_abs(CMatrix(in_basis - CMatrix(in_basis.diagonal().asDiagonal()))) <= 1e-12);

        const JointWeightTable w = joint_weights(obs, model.povm, model.state);
        CHECK(max_diff(transform_A_to_M(obs.values(), d.gauge, w), d.m_values) <= 1e-10);
        CHECK(max_diff(transform_M_to_A(d.m_values, d.gauge, w), obs.values()) <= 1e-9);

        // functions of Â share the certificate
        const Observable sq(CMatrix(obs.matrix() * obs.matrix()));
        Rng rng(seed + 99);
        const Observable poly(cubic(obs.matrix(), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                    rng.uniform(-1, 1), rng.uniform(-1, 1)));
        for (const Observable* f : {&sq, &poly}) {
            const Certification cf = certify_error_free(*f, model.povm, model.state, 1e-9);
            CHECK(cf.error_free);
            const double fs = std::max(1.0, max_abs(f->matrix()) * max_abs(f->matrix()));
            CHECK(ozawa_error(*f, model.povm, cf.estimates, model.state).total <= 1e-9 * fs);
        }
    }
}

TEST_CASE("complex scenarios fail certification with positive error", "[errorfree][property]") {
    int failed = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ScenarioModel model = build_model(generate_random_scenario(2 + seed % 5, seed, RandomKind::Projective));
        const Certification c = certify_error_free(model.observable, model.povm, model.state);
        const double e = ozawa_error(model.observable, model.povm, c.estimates, model.state).total;
        const double scale = std::max(1.0, std::pow(max_abs(model.observable.matrix()), 2));
        CHECK(c.error_free == (e <= 1e-18 * scale));
        if (!c.error_free) {
            ++failed;
            const ProjectiveBasis basis = *measurement_basis(model);
            CHECK(code_of([&] { decompose(model.observable, basis, model.state); }) == ErrorCode::NotErrorFree);
        }
    }
    CHECK(failed == 100);
}

TEST_CASE("gauge covariance", "[errorfree][property]") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const RealCase rc = real_case(seed);
        const auto& [model, basis] = rc;
        const Decomposition d0 = decompose(model.observable, basis, model.state);
        const JointWeightTable w = joint_weights(model.observable, model.povm, model.state);
        for (double c : {-2.0, 0.5, 10.0}) {
            const Decomposition dc = decompose(model.observable, basis, model.state, d0.gauge + c);
            std::vector<double> expected = d0.m_values;
            for (double& v : expected) v -= c;
            CHECK(max_diff(dc.m_values, expected) <= 1e-12);
            CHECK(max_diff(dc.a_estimates.values, d0.a_estimates.values) <= 1e-12);
            CHECK(max_abs(CMatrix(dc.b_matrix + dc.m_matrix - d0.b_matrix - d0.m_matrix)) <= 1e-12);
            CHECK(max_diff(transform_M_to_A(dc.m_values, dc.gauge, w),
                           transform_M_to_A(d0.m_values, d0.gauge, w)) <= 1e-12);
        }
    }
}
