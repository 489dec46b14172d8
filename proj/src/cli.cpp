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

#include "qmeas/cli.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmeas/canonical_json.hpp"
#include "qmeas/report.hpp"

namespace qmeas {

using nlohmann::json;

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MarginalMismatch:
    case ErrorCode::StepTooSmall:
    case ErrorCode::NumericalFailure:
    case ErrorCode::PreconditionViolated:
    case ErrorCode::EstimateIdentityViolated:
        return kExitNumericalCheck;
    case ErrorCode::NotErrorFree:
    case ErrorCode::NotRankOne:
        return kExitCertification;
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
        return kExitIo;
    default:
        return kExitValidation;
    }
}

namespace {

enum class Format { Json, Csv, Text };

struct GlobalOptions {
    std::optional<double> tol;
    Format format = Format::Json;
    bool quiet = false;
};

struct Output {
    json body;
    std::string csv;  // table form; empty means "flatten body"
    int code = kExitOk;
};

ScenarioModel load_model(const std::string& path, const GlobalOptions& g) {
    const Scenario s = load_scenario(path);
    const Tolerances base = s.tolerances();
    return build_model(s, g.tol ? base.with_check_tol(*g.tol) : base);
}

std::vector<double> p_m_of(const ScenarioModel& model) {
    std::vector<double> p;
    for (const auto& e : model.povm.elements()) p.push_back(povm_probability(e, model.state, model.tol).value);
    return p;
}

Output cmd_analyze(const std::string& path, const GlobalOptions& g) {
    const ScenarioModel model = load_model(path, g);
    const AnalysisReport r = run_report(model);
    Output o{report_json(r), weights_csv(r.weights)};
    return o;
}

Output cmd_dirac(const std::string& path, const GlobalOptions& g) {
    const ScenarioModel model = load_model(path, g);
    const DiracTable t = dirac_distribution(model.observable, model.povm, model.state);
    const JointWeightTable w = joint_weights(model.observable, model.povm, model.state, model.tol);
    return {{{"dirac", dirac_json(t, model.tol.certify_tol)},
             {"joint_weights", weights_json(w, model.observable.values(), model.tol.marginal_tol)}},
            dirac_csv(t)};
}

Output cmd_error(const std::string& path, const std::string& source, const GlobalOptions& g) {
    const ScenarioModel model = load_model(path, g);
    const auto& obs = model.observable;
    const JointWeightTable w = joint_weights(obs, model.povm, model.state, model.tol);
    EstimateAssignment est;
    std::string used;
    std::vector<std::size_t> flagged;
    if (source == "optimal" || (source.empty() && !model.estimates)) {
        const auto opt = optimal_estimates(obs.values(), w, ZeroProbPolicy::Skip, model.tol.prob_floor);
        est = opt.estimates;
        flagged = opt.flagged;
        used = "optimal";
    } else if (source.empty() || source == "file") {
        // "file" selects the estimates stored in the scenario itself
        if (!model.estimates) {
            throw Error(ErrorCode::ValidationError, "scenario has no estimates", "estimates");
        }
        est = *model.estimates;
        used = "scenario";
    } else {
        std::ifstream in(source);
        if (!in) throw Error(ErrorCode::IoError, "cannot open " + source);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::ParseError, e.what());
        }
        if (j.is_object() && j.contains("estimates")) j = j["estimates"];
        if (!j.is_array()) throw Error(ErrorCode::ParseError, "estimates file must hold an array");
        for (const auto& x : j) {
            if (!x.is_number()) throw Error(ErrorCode::ParseError, "estimates must be numbers");
            est.values.push_back(x.get<double>());
        }
        if (est.size() != model.povm.size()) {
            throw Error(ErrorCode::ValidationError, "estimates: one value per outcome is required",
                        "estimates");
        }
        used = source;
    }
    const ErrorReport e = ozawa_error(obs, model.povm, est, model.state);
    const double fw = error_from_weights(obs.values(), est, w);
    json body = error_json(e, fw, model.tol.marginal_tol);
    body["estimates_source"] = used;
    body["zero_probability_outcomes"] = flagged;
    Output o{body, estimates_csv({{"estimate", est.values}, {"contribution", e.per_outcome}})};
    if (std::abs(e.total - fw) > model.tol.marginal_tol) o.code = kExitNumericalCheck;
    return o;
}

Output cmd_certify(const std::string& path, const GlobalOptions& g) {
    const ScenarioModel model = load_model(path, g);
    const auto c = certify_error_free(model.observable, model.povm, model.state,
                                      model.tol.certify_tol, model.tol.overlap_floor);
    const auto r = dirac_reality_check(model.observable, model.povm, model.state, model.tol.certify_tol);
    Output o{certification_json(c, r, model.tol.certify_tol),
             estimates_csv({{"estimate", c.estimates.values}})};
    if (!c.error_free) o.code = kExitCertification;
    return o;
}

Decomposition decompose_model(const ScenarioModel& model, std::optional<double> gauge) {
    const auto basis = measurement_basis(model);
    if (!basis) {
        throw Error(ErrorCode::NotRankOne, "decomposition needs an orthonormal measurement basis");
    }
    return decompose(model.observable, *basis, model.state, gauge, model.tol);
}

std::optional<double> parse_gauge(const std::string& text, const ScenarioModel& model) {
    if (text.empty()) return model.gauge;
    if (text == "mean") return std::nullopt;
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ValidationError, "--gauge expects a real number or \"mean\"", "gauge");
}

Output cmd_decompose(const std::string& path, const std::string& gauge, const GlobalOptions& g) {
    const ScenarioModel model = load_model(path, g);
    const Decomposition d = decompose_model(model, parse_gauge(gauge, model));
    Output o{decomposition_json(d, model.tol.decomposition_tol),
             estimates_csv({{"a_estimate", d.a_estimates.values}, {"m_value", d.m_values}})};
    if (d.eigenstate_defect > model.tol.decomposition_tol) o.code = kExitNumericalCheck;
    return o;
}

Output cmd_correlate(const std::string& path, const GlobalOptions& g) {
    const ScenarioModel model = load_model(path, g);
    const Decomposition d = decompose_model(model, model.gauge);
    const JointWeightTable w = joint_weights(model.observable, model.povm, model.state, model.tol);
    const CorrelationReport c = correlation_report(d, model.observable, w, model.state);
    const auto moments = correlation_moments(model.observable, d.m_matrix, d.gauge, model.state,
                                             model.tol.decomposition_tol);
    const auto forms = correlation_convert(d.a_estimates, d.m_values, d.gauge, p_m_of(model));
    json body = correlation_json(c, model.tol.corr_tol);
    body["moments"] = {{"from_A", moments.from_A}, {"from_M", moments.from_M}};
    body["m_context_forms"] = {forms.form1, forms.form2, forms.form3};
    body["gauge"] = d.gauge;
    Output o{body, ""};
    if (c.max_spread > model.tol.corr_tol || c.imag_operator > model.tol.corr_tol) {
        o.code = kExitNumericalCheck;
    }
    return o;
}

Output cmd_oracle(const std::string& path, std::optional<double> step, const GlobalOptions& g) {
    const ScenarioModel model = load_model(path, g);
    const EstimateAssignment base =
        model.estimates ? *model.estimates : EstimateAssignment{std::vector<double>(model.povm.size(), 0.0)};
    const double h = step.value_or(model.tol.fd_step);
    const JointWeightTable fd =
        joint_weights_fd_oracle(model.observable, model.povm, model.state, base, h, model.tol);
    const JointWeightTable w = joint_weights(model.observable, model.povm, model.state, model.tol);
    const double diff = (fd.weights - w.weights).cwiseAbs().maxCoeff();
    json body = {{"step", h},
                 {"oracle_weights", weights_json(fd, model.observable.values(), model.tol.oracle_tol)["weights"]},
                 {"formula_weights", weights_json(w, model.observable.values(), model.tol.oracle_tol)["weights"]},
                 {"max_difference", diff},
                 {"agree", diff <= model.tol.oracle_tol},
                 {"tolerance", model.tol.oracle_tol}};
    Output o{body, weights_csv(fd)};
    if (diff > model.tol.oracle_tol) o.code = kExitNumericalCheck;
    return o;
}

Output cmd_sample(const std::string& path, std::size_t n, std::uint64_t seed, const GlobalOptions& g) {
    const ScenarioModel model = load_model(path, g);
    const auto freq = sample_outcomes(model, n, seed);
    const auto p = p_m_of(model);
    double dev = 0.0;
    for (std::size_t m = 0; m < p.size(); ++m) dev = std::max(dev, std::abs(freq[m] - p[m]));
    return {{{"n", n}, {"seed", seed}, {"frequencies", freq}, {"probabilities", p},
             {"max_deviation", dev}},
            estimates_csv({{"frequency", freq}, {"probability", p}})};
}

void emit(const Output& o, const GlobalOptions& g, std::ostream& out) {
    if (g.quiet) return;
    switch (g.format) {
    case Format::Json: out << dump_canonical(o.body); break;
    case Format::Csv: out << (o.csv.empty() ? "key,value\n" + flatten_json(o.body, ",") : o.csv); break;
    case Format::Text: out << flatten_json(o.body, " = "); break;
    }
}

template <class F>
int guarded(std::ostream& err, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumericalCheck;
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum measurement analysis: joint weights, errors, weak values, decompositions"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOptions g;
    std::string format = "json";
    app.add_option("--tol", g.tol, "Override the check tolerances")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_flag("--quiet", g.quiet, "Suppress standard output");

    std::vector<std::string> files;
    std::string file;
    auto* analyze = app.add_subcommand("analyze", "Full analysis report");
    analyze->add_option("scenarios", files, "Scenario files")->required();
    auto* dirac = app.add_subcommand("dirac", "Dirac distribution and joint weights");
    dirac->add_option("scenario", file)->required();
    std::string estimates_source;
    auto* error = app.add_subcommand("error", "Measurement error");
    error->add_option("scenario", file)->required();
    error->add_option("--estimates", estimates_source, "\"optimal\", \"file\" (estimates in the scenario) or a JSON file of estimates");
    auto* certify = app.add_subcommand("certify", "Error-free certification");
    certify->add_option("scenario", file)->required();
    std::string gauge;
    auto* decompose_cmd = app.add_subcommand("decompose", "Decomposition A = B + M");
    decompose_cmd->add_option("scenario", file)->required();
    decompose_cmd->add_option("--gauge", gauge, "Real gauge value or \"mean\"");
    auto* correlate = app.add_subcommand("correlate", "Correlation identities");
    correlate->add_option("scenario", file)->required();
    std::optional<double> step;
    auto* oracle = app.add_subcommand("oracle", "Finite-difference joint-weight oracle");
    oracle->add_option("scenario", file)->required();
    oracle->add_option("--step", step)->check(CLI::PositiveNumber);
    std::string kind = "real", out_path;
    std::size_t dim = 2, elements = 0;
    std::uint64_t seed = 0;
    auto* gen = app.add_subcommand("gen", "Generate a scenario");
    gen->add_option("--kind", kind)->check(CLI::IsMember({"real", "random", "povm"}));
    gen->add_option("--dim", dim)->required();
    gen->add_option("--seed", seed)->required();
    gen->add_option("--elements", elements, "Number of POVM elements (povm kind)");
    gen->add_option("-o,--output", out_path);
    std::size_t count = 1;
    auto* sample = app.add_subcommand("sample", "Sample measurement outcomes");
    sample->add_option("scenario", file)->required();
    sample->add_option("-n", count)->required()->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed)->required();

    std::vector<std::string> argv_store{"qmeas"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    g.format = format == "csv" ? Format::Csv : format == "text" ? Format::Text : Format::Json;

    auto run_one = [&](auto&& producer) {
        return guarded(err, [&] {
            const Output o = producer();
            emit(o, g, out);
            return o.code;
        });
    };

    if (*analyze) {
        if (files.size() == 1) return run_one([&] { return cmd_analyze(files[0], g); });
        // Files are analyzed concurrently; each keeps its own result or error.
        std::vector<std::future<std::pair<int, json>>> jobs;
        for (const auto& f : files) {
            jobs.push_back(std::async(std::launch::async, [f, &g]() -> std::pair<int, json> {
                try {
                    Output o = cmd_analyze(f, g);
                    return {o.code, json{{"path", f}, {"exit_code", o.code}, {"report", o.body}}};
                } catch (const Error& e) {
                    const int code = exit_code_for(e.code());
                    return {code, json{{"path", f}, {"exit_code", code}, {"error", e.what()}}};
                }
            }));
        }
        json all = json::array();
        int worst = kExitOk;
        for (auto& job : jobs) {
            auto [code, j] = job.get();
            worst = std::max(worst, code);
            if (j.contains("error")) err << "error: " << j["path"].get<std::string>() << ": "
                                         << j["error"].get<std::string>() << "\n";
            all.push_back(std::move(j));
        }
        emit(Output{json{{"files", all}}, ""}, g, out);
        return worst;
    }
    if (*dirac) return run_one([&] { return cmd_dirac(file, g); });
    if (*error) return run_one([&] { return cmd_error(file, estimates_source, g); });
    if (*certify) return run_one([&] { return cmd_certify(file, g); });
    if (*decompose_cmd) return run_one([&] { return cmd_decompose(file, gauge, g); });
    if (*correlate) return run_one([&] { return cmd_correlate(file, g); });
    if (*oracle) return run_one([&] { return cmd_oracle(file, step, g); });
    if (*sample) return run_one([&] { return cmd_sample(file, count, seed, g); });
    if (*gen) {
        return guarded(err, [&] {
            const Scenario s = kind == "real"
                                   ? generate_real_scenario(dim, seed)
                                   : generate_random_scenario(dim, seed,
                                                              kind == "povm" ? RandomKind::Povm
                                                                             : RandomKind::Projective,
                                                              elements);
            build_model(s);
            if (out_path.empty()) {
                if (!g.quiet) out << scenario_text(s);
            } else {
                save_scenario(s, out_path);
            }
            return static_cast<int>(kExitOk);
        });
    }
    return kExitValidation;
}

} // namespace qmeas
