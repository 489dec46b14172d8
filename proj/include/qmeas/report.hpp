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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmeas/correlations.hpp"
#include "qmeas/error_analysis.hpp"
#include "qmeas/errorfree.hpp"
#include "qmeas/quasiprob.hpp"
#include "qmeas/scenario.hpp"

namespace qmeas {

/// A warning always names the policy that produced it:
/// "zero_probability_outcome", "probability_clamped", "not_rank_one",
/// "not_projective" or "certification_failed".
struct ReportWarning {
    std::string policy;
    std::string block;
    std::string message;
};

struct AnalysisReport {
    Tolerances tol;
    std::vector<double> a_values;
    std::vector<Probability> p_m;
    std::vector<Probability> p_a;
    DiracTable dirac;
    JointWeightTable weights;
    std::optional<ErrorReport> given_error;
    std::optional<double> given_error_from_weights;
    OptimalEstimates optimal;
    ErrorReport optimal_error;
    double optimal_error_from_weights = 0.0;
    DiracReality dirac_reality;
    std::optional<Certification> certification;
    std::optional<Decomposition> decomposition;
    std::optional<CorrelationReport> correlations;
    std::optional<CorrelationMoments> moments;
    std::optional<CorrelationForms> forms;
    std::vector<ReportWarning> warnings;
};

/// Runs every applicable block. Decomposition and correlations are skipped
/// with a warning when certification fails or the measurement is not an
/// orthonormal basis. Module errors are rethrown with field() set to the
/// block name.
AnalysisReport run_report(const ScenarioModel& model);

nlohmann::json report_json(const AnalysisReport& r);

nlohmann::json dirac_json(const DiracTable& t, double tol);
nlohmann::json weights_json(const JointWeightTable& w, const std::vector<double>& a_values,
                            double tol);
nlohmann::json error_json(const ErrorReport& e, double from_weights, double tol);
nlohmann::json certification_json(const Certification& c, const DiracReality& r, double tol);
nlohmann::json decomposition_json(const Decomposition& d, double tol);
nlohmann::json correlation_json(const CorrelationReport& c, double tol);

/// Tables as CSV with a header row naming the indices.
std::string weights_csv(const JointWeightTable& w);
std::string dirac_csv(const DiracTable& t);
std::string estimates_csv(const std::vector<std::pair<std::string, std::vector<double>>>& columns);

/// Flattens nested JSON into "path<sep>value" lines (used by the text and
/// CSV output of blocks without a table).
std::string flatten_json(const nlohmann::json& j, const std::string& sep);

} // namespace qmeas
