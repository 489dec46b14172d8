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

#include "qmeas/error_analysis.hpp"
#include "qmeas/quasiprob.hpp"
#include "test_support.hpp"

using namespace qmeas;
using namespace qmeas::testing;
using Catch::Approx;

namespace {

std::vector<std::vector<double>> to_rows(const JointWeightTable& w) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(w.weights.rows()));
    for (Eigen::Index a = 0; a < w.weights.rows(); ++a)
        for (Eigen::Index m = 0; m < w.weights.cols(); ++m) rows[static_cast<std::size_t>(a)].push_back(w.weights(a, m));
    return rows;
}

EstimateAssignment random_estimates(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    EstimateAssignment e;
    for (std::size_t i = 0; i < n; ++i) e.values.push_back(rng.uniform(-3, 3));
    return e;
}

} // namespace

TEST_CASE("error_operator", "[error]") {
    const Observable z(pauli_z());
    CHECK(max_abs(error_operator(0.0, z) + pauli_z()) == 0.0);
    CHECK(max_abs(error_operator(1.0, z) - diag2(0, 2)) <= 1e-15);
    CHECK(max_abs(error_operator(kSqrt2 - 1, z) - diag2(kSqrt2 - 2, kSqrt2)) <= 1e-15);
}

TEST_CASE("Ozawa error on S1", "[error]") {
    S1 s;
    const ErrorReport naive = ozawa_error(s.obs, s.povm, {{1.0, -1.0}}, s.psi);
    CHECK(naive.total == Approx(2.0).margin(1e-12));
    REQUIRE(naive.per_outcome.size() == 2);
    CHECK(naive.per_outcome[0] + naive.per_outcome[1] == Approx(naive.total).margin(1e-12));

    const ErrorReport weak = ozawa_error(s.obs, s.povm, {{kSqrt2 - 1, kSqrt2 + 1}}, s.psi);
    CHECK(std::abs(weak.total) <= 1e-12);
    for (double p : weak.per_outcome) CHECK(p >= -1e-12);
}

TEST_CASE("Ozawa error vanishes on an eigenstate with eigenvalue estimates", "[error]") {
    S1 s;
    const ErrorReport r = ozawa_error(s.obs, s.povm, {{-1.0, -1.0}}, make_state(vec2(0, 1)));
    CHECK(std::abs(r.total) <= 1e-15);
}

TEST_CASE("Ozawa error argument checks", "[error]") {
    S1 s;
    CHECK(code_of([&] { ozawa_error(s.obs, s.povm, {{1.0}}, s.psi); }) == ErrorCode::DimensionMismatch);
    CVector v3 = CVector::Zero(3);
    v3[0] = 1;
    CHECK(code_of([&] { ozawa_error(s.obs, s.povm, {{1.0, 1.0}}, make_state(v3)); }) ==
          ErrorCode::DimensionMismatch);
}

TEST_CASE("statistical error form on S1", "[error]") {
    S1 s;
    const JointWeightTable w = joint_weights(s.obs, s.povm, s.psi);
    const std::vector<double> av = s.obs.values();
    CHECK(error_from_weights(av, {{1.0, -1.0}}, w) == Approx(2.0).margin(1e-12));
    CHECK(std::abs(error_from_weights(av, {{kSqrt2 - 1, kSqrt2 + 1}}, w)) <= 1e-12);

    // individual terms of the weak-value sum: two are 0.5, one is negative
    const double e_plus = kSqrt2 - 1, e_minus = kSqrt2 + 1;
    const double t_pp = (e_plus - 1) * (e_plus - 1) * w.weights(S1::kPlus, S1::kPlusX);
    const double t_mp = (e_plus + 1) * (e_plus + 1) * w.weights(S1::kMinus, S1::kPlusX);
    const double t_pm = (e_minus - 1) * (e_minus - 1) * w.weights(S1::kPlus, S1::kMinusX);
    const double t_mm = (e_minus + 1) * (e_minus + 1) * w.weights(S1::kMinus, S1::kMinusX);
    CHECK(t_pp == Approx(0.207107).margin(1e-6));
    CHECK(t_mp == Approx(0.5).margin(1e-12));
    CHECK(t_pm == Approx(0.5).margin(1e-12));
    CHECK(t_mm == Approx(-1.207107).margin(1e-6));

    CHECK(code_of([&] { error_from_weights({1.0}, {{1.0, -1.0}}, w); }) == ErrorCode::ShapeMismatch);
    CHECK(code_of([&] { error_from_weights(av, {{1.0}}, w); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("statistical error vanishes for a perfect measurement", "[error]") {
    const Observable z(pauli_z());
    const Povm p = validate_povm({diag2(0, 1), diag2(1, 0)});
    const JointWeightTable w = joint_weights(z, p, s1_state());
    CHECK(std::abs(error_from_weights(z.values(), {{-1.0, 1.0}}, w)) <= 1e-15);
    const OptimalEstimates opt = optimal_estimates(z.values(), w);
    CHECK(opt.estimates.values[0] == Approx(-1.0));
    CHECK(opt.estimates.values[1] == Approx(1.0));
    CHECK(opt.flagged.empty());
}

TEST_CASE("optimal estimates on S1 leave the eigenvalue range", "[error]") {
    S1 s;
    const JointWeightTable w = joint_weights(s.obs, s.povm, s.psi);
    const OptimalEstimates opt = optimal_estimates(s.obs.values(), w);
    CHECK(opt.estimates.values[S1::kPlusX] == Approx(kSqrt2 - 1).margin(1e-12));
    CHECK(opt.estimates.values[S1::kMinusX] == Approx(kSqrt2 + 1).margin(1e-12));
    CHECK(opt.estimates.values[S1::kMinusX] > 1.0);
    // the conditional averages in unnormalized form
    CHECK(w.marginal_m[S1::kPlusX] == Approx(0.853553).margin(1e-6));
    CHECK(w.marginal_m[S1::kMinusX] == Approx(0.146447).margin(1e-6));
}

TEST_CASE("optimal estimates with zero-probability outcomes", "[error]") {
    S1 s;
    const State down = make_state(vec2(0, 1));
    // three-outcome POVM; the last element is blind to |1⟩
    const Povm p = validate_povm({diag2(0.5, 0.5), diag2(0.2, 0.5), diag2(0.3, 0.0)});
    const JointWeightTable w = joint_weights(s.obs, p, down);
    const double mean = expectation(s.obs.matrix(), down);

    const OptimalEstimates skip = optimal_estimates(s.obs.values(), w);
    CHECK(skip.estimates.values[0] == Approx(-1.0));
    CHECK(skip.estimates.values[1] == Approx(-1.0));
    CHECK(skip.estimates.values[2] == 0.0);
    CHECK(skip.flagged == std::vector<std::size_t>{2});

    const OptimalEstimates zero = optimal_estimates(s.obs.values(), w, ZeroProbPolicy::AssignZero);
    CHECK(zero.estimates.values[2] == 0.0);
    CHECK(zero.flagged == std::vector<std::size_t>{2});

    const OptimalEstimates by_mean = optimal_estimates(s.obs.values(), w, ZeroProbPolicy::AssignMean, 1e-12, mean);
    CHECK(by_mean.estimates.values[2] == Approx(-1.0));
    CHECK(by_mean.policy == ZeroProbPolicy::AssignMean);

    JointWeightTable empty = w;
    empty.weights.setZero();
    empty.marginal_m.setZero();
    CHECK(code_of([&] { optimal_estimates(s.obs.values(), empty); }) == ErrorCode::AllOutcomesZero);
}

TEST_CASE("eigenstate input: every populated outcome estimates the eigenvalue", "[error]") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const ScenarioModel model = random_model(seed);
        const auto& obs = model.observable;
        const std::size_t a0 = seed % obs.num_outcomes();
        const State eig = make_state(obs.spectral().eigenvectors.col(static_cast<Eigen::Index>(a0)));
        const JointWeightTable w = joint_weights(obs, model.povm, eig);
        const OptimalEstimates opt = optimal_estimates(obs.values(), w);
        for (std::size_t m = 0; m < model.povm.size(); ++m) {
            if (std::find(opt.flagged.begin(), opt.flagged.end(), m) != opt.flagged.end()) continue;
            CHECK(opt.estimates.values[m] == Approx(obs.value(a0)).margin(1e-9));
        }
    }
}

TEST_CASE("operator and statistical forms agree", "[error][property]") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const ScenarioModel model = random_model(seed);
        const auto est = random_estimates(model.povm.size(), seed + 7);
        const ErrorReport op = ozawa_error(model.observable, model.povm, est, model.state);
        const JointWeightTable w = joint_weights(model.observable, model.povm, model.state);
        const double stat = error_from_weights(model.observable.values(), est, w);
        CHECK(std::abs(op.total - stat) <= 1e-9);
        CHECK(std::abs(op.total - brute_weighted_error(model.observable.values(), est.values, to_rows(w))) <= 1e-9);
        double sum = 0.0;
        for (double p : op.per_outcome) {
            CHECK(p >= -1e-12);
            sum += p;
        }
        CHECK(std::abs(sum - op.total) <= 1e-12);
    }
}

TEST_CASE("optimal estimates minimize the error", "[error][property]") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const ScenarioModel model = random_model(seed);
        const JointWeightTable w = joint_weights(model.observable, model.povm, model.state);
        const OptimalEstimates opt = optimal_estimates(model.observable.values(), w);
        const double best = ozawa_error(model.observable, model.povm, opt.estimates, model.state).total;
        for (std::size_t m = 0; m < model.povm.size(); ++m) {
            if (w.marginal_m[static_cast<Eigen::Index>(m)] <= 1e-6) continue;
            for (double delta : {-0.01, 0.01}) {
                EstimateAssignment moved = opt.estimates;
                moved.values[m] += delta;
                CHECK(ozawa_error(model.observable, model.povm, moved, model.state).total > best);
            }
        }
    }
}

TEST_CASE("error is covariant under a common shift", "[error][property]") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ScenarioModel model = random_model(seed);
        const auto est = random_estimates(model.povm.size(), seed + 3);
        const double c = Rng(seed + 11).uniform(-5, 5);
        const auto n = model.observable.matrix().rows();
        const Observable shifted(CMatrix(model.observable.matrix() + c * CMatrix::Identity(n, n)));
        EstimateAssignment moved = est;
        for (double& x : moved.values) x += c;
        const double e0 = ozawa_error(model.observable, model.povm, est, model.state).total;
        const double e1 = ozawa_error(shifted, model.povm, moved, model.state).total;
        CHECK(std::abs(e0 - e1) <= 1e-10);
    }
}
