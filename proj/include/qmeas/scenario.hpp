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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmeas/quantum_objects.hpp"

namespace qmeas {

enum class MeasurementKind { ProjectiveBasis, Povm };

/// Scenario as written in a scenario file. Holds the raw data; validated
/// objects are produced by build_model().
///
/// File format (JSON): complex numbers are [re, im] (a bare number is read
/// as real), matrices are row-major arrays of rows, bases are arrays of
/// vectors.
///
///   { "dim": 2,
///     "observable": {"matrix": [[...], ...]}            or
///                   {"eigenvalues": [...], "basis": [[...], ...]},
///                   optional "labels": ["up", "down"]
///     "measurement": {"type": "projective_basis", "vectors": [[...], ...]} or
///                    {"type": "povm", "elements": [matrix, ...]},
///     "state": [...],
///     "estimates": [...], "gauge": 0.5, "seed": 1,     (optional)
///     "tolerances": {"certify_tol": 1e-9, ...} }       (optional)
struct Scenario {
    std::size_t dim = 0;
    std::optional<CMatrix> observable_matrix;
    std::optional<RVector> observable_eigenvalues;
    std::optional<CMatrix> observable_basis;  // columns
    std::vector<std::string> labels;
    MeasurementKind measurement_kind = MeasurementKind::ProjectiveBasis;
    CMatrix measurement_basis;                // columns
    std::vector<CMatrix> povm_elements;
    CVector state;
    std::optional<std::vector<double>> estimates;
    std::optional<double> gauge;
    std::optional<std::uint64_t> seed;
    std::map<std::string, double> tolerance_overrides;

    Tolerances tolerances() const;
};

/// Validated objects built from a Scenario.
struct ScenarioModel {
    Tolerances tol;
    Observable observable;
    std::optional<ProjectiveBasis> basis;
    Povm povm;
    State state;
    std::optional<EstimateAssignment> estimates;
    std::optional<double> gauge;
};

/// Throws ValidationError with field() set to the offending block
/// ("dim", "observable", "measurement", "state", "estimates", "tolerances").
ScenarioModel build_model(const Scenario& s);
ScenarioModel build_model(const Scenario& s, const Tolerances& tol);

/// Throws ParseError on malformed JSON or wrong field types.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

/// Parses and validates. IoError when unreadable, ParseError (with line and
/// column) on malformed text, ValidationError on invalid content.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text);
void save_scenario(const Scenario& s, const std::filesystem::path& path);
std::string scenario_text(const Scenario& s);

/// Diagonal target with distinct eigenvalues, real orthogonal measurement
/// basis and real state; re-drawn until every |⟨m|ψ⟩| and |⟨a|ψ⟩| exceeds
/// 1e-6 (DegenerateDraw after 1000 attempts).
Scenario generate_real_scenario(std::size_t d, std::uint64_t seed);

enum class RandomKind { Projective, Povm };

/// Random Hermitian target, complex state, and either a random unitary basis
/// or a random full-rank POVM normalized to completeness. `povm_elements`
/// defaults to d + 2.
Scenario generate_random_scenario(std::size_t d, std::uint64_t seed, RandomKind kind,
                                  std::size_t povm_elements = 0);

/// Empirical outcome frequencies of n draws from P(m|ψ).
std::vector<double> sample_outcomes(const ScenarioModel& model, std::size_t n, std::uint64_t seed);
std::vector<double> sample_outcomes(const Scenario& s, std::size_t n, std::uint64_t seed);

/// The measurement as an orthonormal basis when it is one (a projective
/// basis, or a POVM of d unit-weight rank-one elements).
std::optional<ProjectiveBasis> measurement_basis(const ScenarioModel& model);

} // namespace qmeas
