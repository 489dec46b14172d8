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

#include "qmeas/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "qmeas/canonical_json.hpp"
#include "qmeas/error.hpp"
#include "qmeas/random.hpp"

namespace qmeas {

using nlohmann::json;

namespace {

constexpr std::pair<const char*, double Tolerances::*> kToleranceFields[] = {
    {"herm_tol", &Tolerances::herm_tol},
    {"ortho_tol", &Tolerances::ortho_tol},
    {"recon_tol", &Tolerances::recon_tol},
    {"group_tol", &Tolerances::group_tol},
    {"norm_tol", &Tolerances::norm_tol},
    {"psd_tol", &Tolerances::psd_tol},
    {"comp_tol", &Tolerances::comp_tol},
    {"rank_tol", &Tolerances::rank_tol},
    {"clamp_tol", &Tolerances::clamp_tol},
    {"comm_tol", &Tolerances::comm_tol},
    {"marginal_tol", &Tolerances::marginal_tol},
    {"prob_floor", &Tolerances::prob_floor},
    {"overlap_floor", &Tolerances::overlap_floor},
    {"certify_tol", &Tolerances::certify_tol},
    {"decomposition_tol", &Tolerances::decomposition_tol},
    {"corr_tol", &Tolerances::corr_tol},
    {"fd_step", &Tolerances::fd_step},
    {"oracle_tol", &Tolerances::oracle_tol},
};

[[noreturn]] void parse_fail(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ParseError, field + ": " + what, field);
}

Complex complex_from(const json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    parse_fail(field, "expected a number or [re, im]");
}

CVector vector_from(const json& j, const std::string& field) {
    if (!j.is_array()) parse_fail(field, "expected an array");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from(j[i], field);
    return v;
}

/// Rows of a matrix, or vectors of a basis (stored as columns when `as_columns`).
CMatrix matrix_from(const json& j, const std::string& field, bool as_columns = false) {
    if (!j.is_array() || j.empty()) parse_fail(field, "expected a non-empty array of arrays");
    const std::size_t n = j.size();
    const std::size_t k = j[0].is_array() ? j[0].size() : 0;
    CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) {
        const CVector row = vector_from(j[i], field);
        if (static_cast<std::size_t>(row.size()) != k) parse_fail(field, "ragged array");
        m.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return as_columns ? CMatrix(m.transpose()) : m;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json vector_json(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v[i]));
    return out;
}

json matrix_json(const CMatrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
    return out;
}

json columns_json(const CMatrix& m) { return matrix_json(m.transpose()); }

template <class F>
auto validated(const char* field, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(ErrorCode::ValidationError, std::string(field) + ": " + e.what(), field);
    }
}

} // namespace

Tolerances Scenario::tolerances() const {
    Tolerances t;
    for (const auto& [name, value] : tolerance_overrides) {
        const auto* it = std::find_if(std::begin(kToleranceFields), std::end(kToleranceFields),
                                      [&](const auto& f) { return name == f.first; });
        if (it == std::end(kToleranceFields)) {
            throw Error(ErrorCode::ValidationError, "tolerances: unknown tolerance " + name,
                        "tolerances");
        }
        t.*(it->second) = value;
    }
    return t;
}

ScenarioModel build_model(const Scenario& s) {
    return build_model(s, validated("tolerances", [&] { return s.tolerances(); }));
}

ScenarioModel build_model(const Scenario& s, const Tolerances& tol) {
    const auto d = static_cast<Eigen::Index>(s.dim);
    if (s.dim == 0) throw Error(ErrorCode::ValidationError, "dim: must be positive", "dim");

    Observable obs = validated("observable", [&] {
        if (s.observable_matrix) {
            if (s.observable_matrix->rows() != d) {
                throw Error(ErrorCode::DimensionMismatch, "matrix is not dim x dim");
            }
            return Observable(*s.observable_matrix, tol, s.labels);
        }
        if (!s.observable_eigenvalues || !s.observable_basis) {
            throw Error(ErrorCode::DimensionMismatch, "needs a matrix or eigenvalues with a basis");
        }
        if (s.observable_basis->rows() != d) {
            throw Error(ErrorCode::DimensionMismatch, "basis vectors do not have length dim");
        }
        return Observable::from_spectrum(*s.observable_eigenvalues, *s.observable_basis, tol, s.labels);
    });
    if (obs.dim() != s.dim) {
        throw Error(ErrorCode::ValidationError, "observable: matrix is not dim x dim", "observable");
    }

    std::optional<ProjectiveBasis> basis;
    Povm povm = validated("measurement", [&] {
        if (s.measurement_kind == MeasurementKind::ProjectiveBasis) {
            if (s.measurement_basis.rows() != d) {
                throw Error(ErrorCode::DimensionMismatch, "basis vectors do not have length dim");
            }
            basis.emplace(s.measurement_basis, tol);
            return Povm::from_basis(*basis);
        }
        for (const auto& e : s.povm_elements) {
            if (e.rows() != d || e.cols() != d) {
                throw Error(ErrorCode::DimensionMismatch, "POVM element is not dim x dim");
            }
        }
        return validate_povm(s.povm_elements, tol);
    });

    State psi = validated("state", [&] {
        if (s.state.size() != d) {
            throw Error(ErrorCode::DimensionMismatch,
                        "length " + std::to_string(s.state.size()) + " differs from dim " +
                            std::to_string(s.dim));
        }
        return make_state(s.state, tol.norm_tol, true);
    });

    std::optional<EstimateAssignment> estimates;
    if (s.estimates) {
        validated("estimates", [&] {
            if (s.estimates->size() != povm.size()) {
                throw Error(ErrorCode::DimensionMismatch, "one estimate per outcome is required");
            }
            for (double x : *s.estimates) {
                if (!std::isfinite(x)) throw Error(ErrorCode::NumericalFailure, "non-finite estimate");
            }
            return 0;
        });
        estimates = EstimateAssignment{*s.estimates};
    }
    if (s.gauge && !std::isfinite(*s.gauge)) {
        throw Error(ErrorCode::ValidationError, "gauge: must be finite", "gauge");
    }
    return ScenarioModel{tol, std::move(obs), std::move(basis), std::move(povm), std::move(psi),
                         std::move(estimates), s.gauge};
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) parse_fail("scenario", "expected a JSON object");
    Scenario s;
    if (!j.contains("dim") || !j["dim"].is_number_unsigned()) parse_fail("dim", "expected a positive integer");
    s.dim = j["dim"].get<std::size_t>();

    if (!j.contains("observable") || !j["observable"].is_object()) parse_fail("observable", "missing");
    const json& o = j["observable"];
    if (o.contains("matrix")) {
        s.observable_matrix = matrix_from(o["matrix"], "observable");
    } else if (o.contains("eigenvalues") && o.contains("basis")) {
        const json& ev = o["eigenvalues"];
        if (!ev.is_array()) parse_fail("observable", "eigenvalues must be an array");
        RVector v(static_cast<Eigen::Index>(ev.size()));
        for (std::size_t i = 0; i < ev.size(); ++i) {
            if (!ev[i].is_number()) parse_fail("observable", "eigenvalues must be real numbers");
            v[static_cast<Eigen::Index>(i)] = ev[i].get<double>();
        }
        s.observable_eigenvalues = v;
        s.observable_basis = matrix_from(o["basis"], "observable", true);
    } else {
        parse_fail("observable", "needs \"matrix\" or \"eigenvalues\" with \"basis\"");
    }
    if (o.contains("labels")) {
        if (!o["labels"].is_array()) parse_fail("observable", "labels must be an array of strings");
        for (const auto& l : o["labels"]) {
            if (!l.is_string()) parse_fail("observable", "labels must be an array of strings");
            s.labels.push_back(l.get<std::string>());
        }
    }

    if (!j.contains("measurement") || !j["measurement"].is_object()) parse_fail("measurement", "missing");
    const json& meas = j["measurement"];
    const std::string type = meas.value("type", "");
    if (type == "projective_basis") {
        s.measurement_kind = MeasurementKind::ProjectiveBasis;
        if (!meas.contains("vectors")) parse_fail("measurement", "missing \"vectors\"");
        s.measurement_basis = matrix_from(meas["vectors"], "measurement", true);
    } else if (type == "povm") {
        s.measurement_kind = MeasurementKind::Povm;
        if (!meas.contains("elements") || !meas["elements"].is_array()) {
            parse_fail("measurement", "missing \"elements\"");
        }
        for (const auto& e : meas["elements"]) s.povm_elements.push_back(matrix_from(e, "measurement"));
    } else {
        parse_fail("measurement", "type must be \"projective_basis\" or \"povm\"");
    }

    if (!j.contains("state")) parse_fail("state", "missing");
    s.state = vector_from(j["state"], "state");

    if (j.contains("estimates")) {
        if (!j["estimates"].is_array()) parse_fail("estimates", "expected an array of reals");
        std::vector<double> est;
        for (const auto& x : j["estimates"]) {
            if (!x.is_number()) parse_fail("estimates", "expected an array of reals");
            est.push_back(x.get<double>());
        }
        s.estimates = std::move(est);
    }
    if (j.contains("gauge")) {
        if (!j["gauge"].is_number()) parse_fail("gauge", "expected a real number");
        s.gauge = j["gauge"].get<double>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) parse_fail("seed", "expected a non-negative integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("tolerances")) {
        if (!j["tolerances"].is_object()) parse_fail("tolerances", "expected an object");
        for (const auto& [name, value] : j["tolerances"].items()) {
            if (!value.is_number()) parse_fail("tolerances", name + " must be a number");
            s.tolerance_overrides[name] = value.get<double>();
        }
    }
    return s;
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["dim"] = s.dim;
    json o = json::object();
    if (s.observable_matrix) {
        o["matrix"] = matrix_json(*s.observable_matrix);
    } else {
        json ev = json::array();
        for (Eigen::Index i = 0; i < s.observable_eigenvalues->size(); ++i) {
            ev.push_back((*s.observable_eigenvalues)[i]);
        }
        o["eigenvalues"] = ev;
        o["basis"] = columns_json(*s.observable_basis);
    }
    if (!s.labels.empty()) o["labels"] = s.labels;
    j["observable"] = o;
    if (s.measurement_kind == MeasurementKind::ProjectiveBasis) {
        j["measurement"] = {{"type", "projective_basis"}, {"vectors", columns_json(s.measurement_basis)}};
    } else {
        json elems = json::array();
        for (const auto& e : s.povm_elements) elems.push_back(matrix_json(e));
        j["measurement"] = {{"type", "povm"}, {"elements", elems}};
    }
    j["state"] = vector_json(s.state);
    if (s.estimates) j["estimates"] = *s.estimates;
    if (s.gauge) j["gauge"] = *s.gauge;
    if (s.seed) j["seed"] = *s.seed;
    if (!s.tolerance_overrides.empty()) j["tolerances"] = s.tolerance_overrides;
    return j;
}

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    Scenario s = scenario_from_json(j);
    build_model(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string scenario_text(const Scenario& s) { return dump_canonical(scenario_to_json(s)); }

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << scenario_text(s);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Scenario generate_real_scenario(std::size_t d, std::uint64_t seed) {
    if (d < 2) throw Error(ErrorCode::ValidationError, "dim: real scenarios need d >= 2", "dim");
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(d);

    // Integer ladder with jitter keeps eigenvalues at least 0.4 apart.
    RVector eig(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        eig[k] = static_cast<double>(k) - 0.5 * static_cast<double>(n - 1) + rng.uniform(-0.3, 0.3);
    }

    Scenario s;
    s.dim = d;
    s.seed = seed;
    s.observable_matrix = CMatrix(eig.cast<Complex>().asDiagonal());
    s.measurement_kind = MeasurementKind::ProjectiveBasis;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const RMatrix basis = rng.real_orthogonal(n);
        const RVector psi = rng.real_unit_vector(n);
        const RVector overlaps_m = basis.transpose() * psi;
        if (overlaps_m.cwiseAbs().minCoeff() > 1e-6 && psi.cwiseAbs().minCoeff() > 1e-6) {
            s.measurement_basis = basis.cast<Complex>();
            s.state = psi.cast<Complex>();
            return s;
        }
    }
    throw Error(ErrorCode::DegenerateDraw, "no admissible draw in 1000 attempts");
}

Scenario generate_random_scenario(std::size_t d, std::uint64_t seed, RandomKind kind,
                                  std::size_t povm_elements) {
    if (d < 2) throw Error(ErrorCode::ValidationError, "dim: random scenarios need d >= 2", "dim");
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(d);

    CMatrix x(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) x(i, j) = rng.complex_normal();
    }
    Scenario s;
    s.dim = d;
    s.seed = seed;
    s.observable_matrix = CMatrix(0.5 * (x + x.adjoint()));

    if (kind == RandomKind::Projective) {
        s.measurement_kind = MeasurementKind::ProjectiveBasis;
        s.measurement_basis = rng.unitary(n);
    } else {
        s.measurement_kind = MeasurementKind::Povm;
        const std::size_t count = povm_elements ? povm_elements : d + 2;
        std::vector<CMatrix> raw;
        CMatrix total = CMatrix::Zero(n, n);
        for (std::size_t k = 0; k < count; ++k) {
            CMatrix g(n, n);
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
            }
            raw.push_back(g * g.adjoint());
            total += raw.back();
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(total);
        const CMatrix inv_sqrt = solver.operatorInverseSqrt();
        for (const auto& g : raw) {
            const CMatrix e = inv_sqrt * g * inv_sqrt;
            s.povm_elements.push_back(0.5 * (e + e.adjoint()));
        }
    }
    s.state = rng.complex_unit_vector(n);
    return s;
}

std::vector<double> sample_outcomes(const ScenarioModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::ValidationError, "sample count must be at least 1");
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& e : model.povm.elements()) {
        acc += povm_probability(e, model.state, model.tol).value;
        cumulative.push_back(acc);
    }
    Rng rng(seed);
    std::vector<std::size_t> counts(cumulative.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        ++counts[static_cast<std::size_t>(it - cumulative.begin())];
    }
    std::vector<double> freq;
    freq.reserve(counts.size());
    for (std::size_t c : counts) freq.push_back(static_cast<double>(c) / static_cast<double>(n));
    return freq;
}

std::vector<double> sample_outcomes(const Scenario& s, std::size_t n, std::uint64_t seed) {
    return sample_outcomes(build_model(s), n, seed);
}

std::optional<ProjectiveBasis> measurement_basis(const ScenarioModel& model) {
    if (model.basis) return model.basis;
    const Povm& p = model.povm;
    if (p.size() != p.dim() || !p.all_rank_one()) return std::nullopt;
    CMatrix cols(static_cast<Eigen::Index>(p.dim()), static_cast<Eigen::Index>(p.size()));
    for (std::size_t m = 0; m < p.size(); ++m) {
        if (std::abs(p.rank_one(m)->scale - 1.0) > model.tol.comp_tol) return std::nullopt;
        cols.col(static_cast<Eigen::Index>(m)) = p.rank_one(m)->vector;
    }
    try {
        return ProjectiveBasis(cols, model.tol);
    } catch (const Error&) {
        return std::nullopt;
    }
}

} // namespace qmeas
