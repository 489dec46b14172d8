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

#include "qmeas/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "qmeas/error.hpp"

namespace qmeas {

using nlohmann::json;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
    return buf;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json real_list(const RVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json real_rows(const RMatrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(real_list(m.row(i).transpose()));
    return out;
}

json complex_rows(const CMatrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        out.push_back(row);
    }
    return out;
}

template <class F>
auto in_block(const char* block, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.code(), std::string(block) + ": " + e.what(), block);
    }
}

void flatten(const json& j, const std::string& prefix, const std::string& sep, std::string& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, sep, out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", sep, out);
        }
    } else {
        out += prefix + sep + (j.is_number_float() ? num(j.get<double>()) : j.dump()) + "\n";
    }
}

} // namespace

AnalysisReport run_report(const ScenarioModel& model) {
    const Tolerances& tol = model.tol;
    const Observable& obs = model.observable;
    const Povm& povm = model.povm;
    const State& psi = model.state;

    AnalysisReport r;
    r.tol = tol;
    r.a_values = obs.values();

    in_block("probabilities", [&] {
        for (std::size_t m = 0; m < povm.size(); ++m) {
            r.p_m.push_back(povm_probability(povm.element(m), psi, tol));
        }
        for (std::size_t a = 0; a < obs.num_outcomes(); ++a) {
            r.p_a.push_back(born_probability(obs, a, psi, tol));
        }
        return 0;
    });
    for (std::size_t m = 0; m < r.p_m.size(); ++m) {
        if (r.p_m[m].clamp_defect > 0.0) {
            r.warnings.push_back({"probability_clamped", "probabilities",
                                  "P(m=" + std::to_string(m) + ") clamped by " + num(r.p_m[m].clamp_defect)});
        }
    }
    for (std::size_t a = 0; a < r.p_a.size(); ++a) {
        if (r.p_a[a].clamp_defect > 0.0) {
            r.warnings.push_back({"probability_clamped", "probabilities",
                                  "P(a=" + std::to_string(a) + ") clamped by " + num(r.p_a[a].clamp_defect)});
        }
    }

    r.dirac = in_block("dirac", [&] { return dirac_distribution(obs, povm, psi); });
    r.weights = in_block("joint_weights", [&] { return joint_weights(obs, povm, psi, tol); });

    in_block("error", [&] {
        if (model.estimates) {
            r.given_error = ozawa_error(obs, povm, *model.estimates, psi);
            r.given_error_from_weights = error_from_weights(r.a_values, *model.estimates, r.weights);
        }
        r.optimal = optimal_estimates(r.a_values, r.weights, ZeroProbPolicy::Skip, tol.prob_floor);
        r.optimal_error = ozawa_error(obs, povm, r.optimal.estimates, psi);
        r.optimal_error_from_weights = error_from_weights(r.a_values, r.optimal.estimates, r.weights);
        return 0;
    });
    for (std::size_t m : r.optimal.flagged) {
        r.warnings.push_back({"zero_probability_outcome", "error",
                              "outcome m=" + std::to_string(m) +
                                  " has probability <= prob_floor; its estimate is skipped"});
    }

    r.dirac_reality = in_block("certification", [&] {
        return dirac_reality_check(obs, povm, psi, tol.certify_tol);
    });
    if (!povm.all_rank_one()) {
        r.warnings.push_back({"not_rank_one", "certification",
                              "measurement has elements that are not rank one; error-free "
                              "certification and decomposition skipped"});
        return r;
    }
    r.certification = in_block("certification", [&] {
        return certify_error_free(obs, povm, psi, tol.certify_tol, tol.overlap_floor);
    });
    if (!r.certification->error_free) {
        r.warnings.push_back({"certification_failed", "decomposition",
                              "NotErrorFree: weak values are not real (max |Im| = " +
                                  num(r.certification->max_imag) +
                                  "); decomposition and correlations skipped"});
        return r;
    }
    const auto basis = measurement_basis(model);
    if (!basis) {
        r.warnings.push_back({"not_projective", "decomposition",
                              "measurement is not an orthonormal basis; decomposition skipped"});
        return r;
    }
    in_block("decomposition", [&] {
        r.decomposition = decompose(obs, *basis, psi, model.gauge, tol);
        return 0;
    });
    in_block("correlations", [&] {
        const Decomposition& d = *r.decomposition;
        r.correlations = correlation_report(d, obs, r.weights, psi);
        r.moments = correlation_moments(obs, d.m_matrix, d.gauge, psi, tol.decomposition_tol);
        std::vector<double> pm;
        for (const auto& p : r.p_m) pm.push_back(p.value);
        r.forms = correlation_convert(d.a_estimates, d.m_values, d.gauge, pm);
        return 0;
    });
    return r;
}

json dirac_json(const DiracTable& t, double tol) {
    return {{"entries", complex_rows(t.entries)},
            {"max_imag", t.max_imag()},
            {"sum", complex_json(t.entries.sum())},
            {"tolerance", tol}};
}

json weights_json(const JointWeightTable& w, const std::vector<double>& a_values, double tol) {
    json negative = json::array();
    for (Eigen::Index a = 0; a < w.weights.rows(); ++a) {
        for (Eigen::Index m = 0; m < w.weights.cols(); ++m) {
            if (w.weights(a, m) < -tol) negative.push_back({{"a", a}, {"m", m}, {"weight", w.weights(a, m)}});
        }
    }
    return {{"a_values", a_values},
            {"weights", real_rows(w.weights)},
            {"marginal_m", real_list(w.marginal_m)},
            {"marginal_a", real_list(w.marginal_a)},
            {"total", w.weights.sum()},
            {"min_weight", w.min_weight()},
            {"negative_entries", negative},
            {"tolerance", tol}};
}

json error_json(const ErrorReport& e, double from_weights, double tol) {
    return {{"total", e.total},
            {"per_outcome", e.per_outcome},
            {"estimates", e.estimates_used.values},
            {"from_weights", from_weights},
            {"operator_statistical_difference", std::abs(e.total - from_weights)},
            {"tolerance", tol}};
}

json certification_json(const Certification& c, const DiracReality& r, double tol) {
    return {{"error_free", c.error_free},
            {"max_imag", c.max_imag},
            {"estimates", c.estimates.values},
            {"undefined_outcomes", c.undefined_outcomes},
            {"undefined_leak", c.undefined_leak},
            {"real_dirac", r.real_dirac},
            {"max_imag_dirac_entry", r.max_imag_entry},
            {"tolerance", tol}};
}

json decomposition_json(const Decomposition& d, double tol) {
    return {{"gauge", d.gauge},
            {"m_values", d.m_values},
            {"a_estimates", d.a_estimates.values},
            {"reverse_estimates", d.reverse_estimates},
            {"zero_probability_a", d.zero_probability_a},
            {"m_matrix", complex_rows(d.m_matrix)},
            {"b_matrix", complex_rows(d.b_matrix)},
            {"eigenstate_defect", d.eigenstate_defect},
            {"eigenstate_ok", d.eigenstate_defect <= tol},
            {"tolerance", tol}};
}

json correlation_json(const CorrelationReport& c, double tol) {
    return {{"via_m_context", c.via_m_context},
            {"via_a_context", c.via_a_context},
            {"via_weights", c.via_weights},
            {"via_operator", complex_json(c.via_operator)},
            {"via_operator_reversed", complex_json(c.via_operator_reversed)},
            {"via_A_moments", c.via_A_moments},
            {"via_M_moments", c.via_M_moments},
            {"max_spread", c.max_spread},
            {"imag_operator", c.imag_operator},
            {"consistent", c.max_spread <= tol && c.imag_operator <= tol},
            {"tolerance", tol}};
}

json report_json(const AnalysisReport& r) {
    const Tolerances& tol = r.tol;
    json j;
    json probs;
    json pm = json::array(), pa = json::array();
    double clamp = 0.0;
    for (const auto& p : r.p_m) { pm.push_back(p.value); clamp = std::max(clamp, p.clamp_defect); }
    for (const auto& p : r.p_a) { pa.push_back(p.value); clamp = std::max(clamp, p.clamp_defect); }
    j["probabilities"] = {{"p_m", pm}, {"p_a", pa}, {"max_clamp_defect", clamp},
                          {"tolerance", tol.clamp_tol}};
    j["dirac"] = dirac_json(r.dirac, tol.certify_tol);
    j["joint_weights"] = weights_json(r.weights, r.a_values, tol.marginal_tol);

    json err;
    if (r.given_error) {
        err["given"] = error_json(*r.given_error, *r.given_error_from_weights, tol.marginal_tol);
    }
    err["optimal"] = error_json(r.optimal_error, r.optimal_error_from_weights, tol.marginal_tol);
    err["optimal"]["zero_probability_outcomes"] = r.optimal.flagged;
    err["optimal"]["zero_probability_policy"] = "skip";
    j["error"] = err;

    const double lo = *std::min_element(r.a_values.begin(), r.a_values.end());
    const double hi = *std::max_element(r.a_values.begin(), r.a_values.end());
    json outside = json::array();
    for (std::size_t m = 0; m < r.optimal.estimates.size(); ++m) {
        const bool skipped = std::find(r.optimal.flagged.begin(), r.optimal.flagged.end(), m) !=
                             r.optimal.flagged.end();
        const double x = r.optimal.estimates[m];
        if (!skipped && (x < lo - tol.marginal_tol || x > hi + tol.marginal_tol)) outside.push_back(m);
    }
    j["anomalies"] = {{"estimates_outside_spectrum", outside},
                      {"negative_weight_count", j["joint_weights"]["negative_entries"].size()},
                      {"spectrum_range", {lo, hi}},
                      {"tolerance", tol.marginal_tol}};

    if (r.certification) {
        j["certification"] = certification_json(*r.certification, r.dirac_reality, tol.certify_tol);
    } else {
        j["certification"] = {{"real_dirac", r.dirac_reality.real_dirac},
                              {"max_imag_dirac_entry", r.dirac_reality.max_imag_entry},
                              {"tolerance", tol.certify_tol}};
    }
    if (r.decomposition) j["decomposition"] = decomposition_json(*r.decomposition, tol.decomposition_tol);
    if (r.correlations) {
        j["correlations"] = correlation_json(*r.correlations, tol.corr_tol);
        j["correlations"]["moments"] = {{"from_A", r.moments->from_A}, {"from_M", r.moments->from_M}};
        j["correlations"]["m_context_forms"] = {r.forms->form1, r.forms->form2, r.forms->form3};
    }
    json warnings = json::array();
    for (const auto& w : r.warnings) {
        warnings.push_back({{"policy", w.policy}, {"block", w.block}, {"message", w.message}});
    }
    j["warnings"] = warnings;
    return j;
}

std::string weights_csv(const JointWeightTable& w) {
    std::string out = "a";
    for (Eigen::Index m = 0; m < w.weights.cols(); ++m) out += ",m" + std::to_string(m);
    out += "\n";
    for (Eigen::Index a = 0; a < w.weights.rows(); ++a) {
        out += std::to_string(a);
        for (Eigen::Index m = 0; m < w.weights.cols(); ++m) out += "," + num(w.weights(a, m));
        out += "\n";
    }
    return out;
}

std::string dirac_csv(const DiracTable& t) {
    std::string out = "a,m,re,im\n";
    for (Eigen::Index a = 0; a < t.entries.rows(); ++a) {
        for (Eigen::Index m = 0; m < t.entries.cols(); ++m) {
            out += std::to_string(a) + "," + std::to_string(m) + "," + num(t.entries(a, m).real()) +
                   "," + num(t.entries(a, m).imag()) + "\n";
        }
    }
    return out;
}

std::string estimates_csv(const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
    std::string out = "m";
    std::size_t rows = 0;
    for (const auto& [name, values] : columns) {
        out += "," + name;
        rows = std::max(rows, values.size());
    }
    out += "\n";
    for (std::size_t i = 0; i < rows; ++i) {
        out += std::to_string(i);
        for (const auto& col : columns) out += "," + (i < col.second.size() ? num(col.second[i]) : "");
        out += "\n";
    }
    return out;
}

std::string flatten_json(const json& j, const std::string& sep) {
    std::string out;
    flatten(j, "", sep, out);
    return out;
}

} // namespace qmeas
