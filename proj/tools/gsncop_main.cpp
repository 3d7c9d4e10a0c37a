// Command-line front end: simulate / fit / dependence / compare.
//
// Every run writes a JSON report embedding the exact config and seed needed
// to reproduce it.  Exit codes: 0 success, 2 configuration error, 3 data
// ingestion error, 4 numerical failure, 1 anything else.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "gsncop/copula.hpp"
#include "gsncop/copula_fit.hpp"
#include "gsncop/dependence.hpp"
#include "gsncop/errors.hpp"
#include "gsncop/glm.hpp"
#include "gsncop/io.hpp"
#include "gsncop/longitudinal.hpp"
#include "gsncop/model_eval.hpp"
#include "gsncop/normal.hpp"
#include "gsncop/ordinal.hpp"
#include "gsncop/replication.hpp"
#include "gsncop/sim_designs.hpp"
#include "gsncop/version.hpp"

using json = nlohmann::json;
using namespace gsncop;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 20240801;
    int threads = 1;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
    if (!obj.is_object()) {
        throw ConfigError(context + ": expected a JSON object");
    }
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError(context + ": unknown key '" + item.key() + "'");
        }
    }
}

SeriesPolicy parse_policy(const json& cfg) {
    SeriesPolicy policy;
    if (!cfg.contains("policy")) return policy;
    const json& p = cfg.at("policy");
    check_keys(p, {"tail_mass_tol", "max_terms", "mvn_abs_tol", "quantile_tol"},
               "policy");
    policy.tail_mass_tol = p.value("tail_mass_tol", policy.tail_mass_tol);
    policy.max_terms = p.value("max_terms", policy.max_terms);
    policy.mvn_abs_tol = p.value("mvn_abs_tol", policy.mvn_abs_tol);
    policy.quantile_tol = p.value("quantile_tol", policy.quantile_tol);
    if (!policy.valid()) {
        throw ConfigError("policy: tolerances must be positive");
    }
    return policy;
}

CorrKind parse_kind(const std::string& s) {
    if (s == "exchangeable") return CorrKind::exchangeable;
    if (s == "ar1") return CorrKind::ar1_exponential;
    throw ConfigError("structure must be 'exchangeable' or 'ar1', got '" + s + "'");
}

GsnParams parse_gsn_params(const json& cfg) {
    if (!cfg.contains("params")) return standard_design_params();
    const json& p = cfg.at("params");
    check_keys(p, {"p", "mu", "sigma"}, "params");
    if (!p.contains("p") || !p.contains("mu") || !p.contains("sigma")) {
        throw ConfigError("params: need all of p, mu, sigma");
    }
    std::vector<double> mu_vals = p.at("mu").get<std::vector<double>>();
    const int d = static_cast<int>(mu_vals.size());
    Eigen::VectorXd mu(d);
    for (int j = 0; j < d; ++j) mu(j) = mu_vals[static_cast<size_t>(j)];
    auto rows = p.at("sigma").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != d) {
        throw ConfigError("params.sigma: dimension mismatch with mu");
    }
    Eigen::MatrixXd sigma(d, d);
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != d) {
            throw ConfigError("params.sigma: ragged rows");
        }
        for (int j = 0; j < d; ++j) sigma(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    try {
        return GsnParams(p.at("p").get<double>(), mu, CorrelationMatrix(sigma));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
}

CsvSchema parse_schema(const json& cfg) {
    if (!cfg.contains("schema")) {
        throw ConfigError("missing 'schema'");
    }
    const json& s = cfg.at("schema");
    check_keys(s, {"id", "time", "response", "covariates"}, "schema");
    CsvSchema schema;
    schema.id = s.value("id", std::string("id"));
    schema.time = s.value("time", std::string("time"));
    if (!s.contains("response")) {
        throw ConfigError("schema: missing 'response'");
    }
    schema.response = s.at("response").get<std::string>();
    if (s.contains("covariates")) {
        schema.covariates = s.at("covariates").get<std::vector<std::string>>();
    }
    return schema;
}

json base_report(const std::string& command, const json& config,
                 const GlobalOpts& opts) {
    json report;
    report["schema_version"] = "1";
    report["version"] = GSNCOP_VERSION;
    report["command"] = command;
    report["config"] = config;
    report["seed"] = opts.seed;
    report["threads"] = opts.threads;
    return report;
}

void write_report(const json& report, const GlobalOpts& opts,
                  const std::string& name) {
    std::filesystem::create_directories(opts.out_dir);
    const std::string path = opts.out_dir + "/" + name;
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write '" + path + "'");
    }
    out << report.dump(2) << "\n";
}

json estimates_json(const std::vector<std::string>& names,
                    const Eigen::VectorXd& values, const Eigen::VectorXd& ses) {
    json arr = json::array();
    for (size_t i = 0; i < names.size(); ++i) {
        json e;
        e["name"] = names[i];
        e["value"] = values(static_cast<int>(i));
        e["se"] = ses(static_cast<int>(i));
        arr.push_back(e);
    }
    return arr;
}

json summary_json(const SummaryTable& table) {
    json rows = json::array();
    for (const SummaryRow& r : table.rows) {
        rows.push_back({{"parameter", r.name},
                        {"truth", r.truth},
                        {"mean", r.mean},
                        {"bias", r.bias},
                        {"sd", r.sd},
                        {"se", r.se},
                        {"rmse", r.rmse}});
    }
    return {{"replications", table.replications},
            {"sample_size", table.sample_size},
            {"failures", table.failures},
            {"rows", rows}};
}

void write_summary_csv(const std::string& path, const SummaryTable& table) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write '" + path + "'");
    }
    out << "parameter,truth,mean,bias,sd,se,rmse\n";
    for (const SummaryRow& r : table.rows) {
        out << r.name << "," << format_double(r.truth) << ","
            << format_double(r.mean) << "," << format_double(r.bias) << ","
            << format_double(r.sd) << "," << format_double(r.se) << ","
            << format_double(r.rmse) << "\n";
    }
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const GlobalOpts& opts) {
    const json cfg = load_config(opts.config_path);
    check_keys(cfg,
               {"design", "m", "replications", "structure", "p", "xi", "mu_bar",
                "kappa", "beta", "thresholds", "params", "policy"},
               "simulate");
    const SeriesPolicy policy = parse_policy(cfg);
    if (!cfg.contains("design") || !cfg.contains("m")) {
        throw ConfigError("simulate: need 'design' and 'm'");
    }
    const std::string design = cfg.at("design").get<std::string>();
    const int m = cfg.at("m").get<int>();
    const int reps = cfg.value("replications", 0);
    if (m < 1 || reps < 0) {
        throw ConfigError("simulate: m must be positive and replications nonnegative");
    }
    std::filesystem::create_directories(opts.out_dir);
    json report = base_report("simulate", cfg, opts);
    json outputs = json::array();

    auto matrix_dataset = [&](const std::string& prefix, const GsnParams& params,
                              bool copula_scale) {
        RandomStream stream(opts.seed, 0);
        Eigen::MatrixXd values =
            copula_scale ? copula_sample(params, m, stream, policy)
                         : mgsn_sample(params, m, stream);
        std::vector<std::string> cols;
        for (int j = 1; j <= params.dim(); ++j) {
            cols.push_back((copula_scale ? "u" : "x") + std::to_string(j));
        }
        const std::string path = opts.out_dir + "/data.csv";
        write_matrix_csv(path, cols, values);
        outputs.push_back(prefix + ": " + path);
    };

    if (design == "mgsn" || design == "copula") {
        const GsnParams params = parse_gsn_params(cfg);
        if (reps == 0) {
            matrix_dataset(design, params, design == "copula");
        } else {
            SummaryTable table =
                design == "copula"
                    ? replicate_gsn_copula(params, m, reps, opts.seed, policy,
                                            opts.threads)
                    : replicate_mgsn(params, m, reps, opts.seed, policy,
                                     opts.threads);
            write_summary_csv(opts.out_dir + "/summary.csv", table);
            outputs.push_back(opts.out_dir + "/summary.csv");
            report["summary"] = summary_json(table);
        }
    } else if (design == "glm-gamma" || design == "ordinal-probit") {
        const CorrKind kind =
            parse_kind(cfg.value("structure", std::string("exchangeable")));
        CsvSchema schema;
        schema.response = "y";
        schema.covariates = {"x1", "x2", "t"};
        if (design == "glm-gamma") {
            GammaGlmDesign d;
            d.kind = kind;
            d.p = cfg.value("p", d.p);
            d.xi = cfg.value("xi", d.xi);
            d.mu_bar = cfg.value("mu_bar", d.mu_bar);
            d.kappa = cfg.value("kappa", d.kappa);
            if (cfg.contains("beta")) {
                auto b = cfg.at("beta").get<std::vector<double>>();
                if (b.size() != 4) throw ConfigError("simulate: beta must have 4 entries");
                for (int j = 0; j < 4; ++j) d.beta(j) = b[static_cast<size_t>(j)];
            }
            if (reps == 0) {
                RandomStream stream(opts.seed, 0);
                LongitudinalDataset data = simulate_gamma_glm(d, m, stream, policy);
                write_dataset_csv(opts.out_dir + "/data.csv", data, schema);
                outputs.push_back(opts.out_dir + "/data.csv");
            } else {
                SummaryTable table =
                    replicate_gamma_glm(d, m, reps, opts.seed, policy, opts.threads);
                write_summary_csv(opts.out_dir + "/summary.csv", table);
                outputs.push_back(opts.out_dir + "/summary.csv");
                report["summary"] = summary_json(table);
            }
        } else {
            OrdinalProbitDesign d;
            d.kind = kind;
            d.p = cfg.value("p", d.p);
            d.xi = cfg.value("xi", d.xi);
            d.mu_bar = cfg.value("mu_bar", d.mu_bar);
            if (cfg.contains("beta")) {
                auto b = cfg.at("beta").get<std::vector<double>>();
                if (b.size() != 3) throw ConfigError("simulate: beta must have 3 entries");
                for (int j = 0; j < 3; ++j) d.beta(j) = b[static_cast<size_t>(j)];
            }
            if (cfg.contains("thresholds")) {
                auto g = cfg.at("thresholds").get<std::vector<double>>();
                d.thresholds.resize(static_cast<int>(g.size()));
                for (size_t j = 0; j < g.size(); ++j) d.thresholds(static_cast<int>(j)) = g[j];
                d.n_categories = static_cast<int>(g.size()) + 1;
            }
            if (reps == 0) {
                RandomStream stream(opts.seed, 0);
                LongitudinalDataset data =
                    simulate_ordinal_probit(d, m, stream, policy);
                write_dataset_csv(opts.out_dir + "/data.csv", data, schema);
                outputs.push_back(opts.out_dir + "/data.csv");
            } else {
                SummaryTable table =
                    replicate_ordinal(d, m, reps, opts.seed, policy, opts.threads);
                write_summary_csv(opts.out_dir + "/summary.csv", table);
                outputs.push_back(opts.out_dir + "/summary.csv");
                report["summary"] = summary_json(table);
            }
        }
    } else {
        throw ConfigError("simulate: unknown design '" + design + "'");
    }
    report["outputs"] = outputs;
    write_report(report, opts, "report.json");
    return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FittedModel {
    std::string copula;  // "gsn" or "gaussian"
    std::vector<std::string> names;
    Eigen::VectorXd values;
    Eigen::VectorXd ses;
    double loglik = 0.0;        // full or composite
    double criterion = 0.0;     // aic or claic
    std::string criterion_name; // "aic" / "claic"
    int n_params = 0;
    long long clamps = 0;
    long long floors = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> per_subject;
};

FittedModel run_continuous_fit(const LongitudinalDataset& data,
                               MarginalFamily family, CorrKind kind,
                               bool gaussian, const SeriesPolicy& policy) {
    FittedModel out;
    out.copula = gaussian ? "gaussian" : "gsn";
    MarginalModel marginal = fit_marginal_glm(data, family);
    PitResult pit = pit_transform(data, marginal);
    CopulaStageFit stage2 = fit_copula_stage(pit, data, kind, policy, gaussian);
    SandwichResult sandwich = godambe_sandwich(data, marginal, stage2, policy);

    const Eigen::VectorXd theta = pack_marginal(marginal);
    const Eigen::VectorXd phi = stage2.packed();
    out.names = sandwich.names;
    out.values.resize(theta.size() + phi.size());
    out.values << theta, phi;
    out.ses = sandwich.se;
    Eigen::VectorXd per_subject =
        full_per_subject_loglik(data, marginal, stage2, policy);
    out.loglik = per_subject.sum();
    out.n_params = marginal.n_params() + stage2.n_copula_params();
    out.criterion = aic(out.loglik, out.n_params);
    out.criterion_name = "aic";
    out.clamps = pit.clamped;
    out.iterations = stage2.iterations;
    out.converged = stage2.converged;
    out.per_subject.assign(per_subject.data(),
                           per_subject.data() + per_subject.size());
    return out;
}

FittedModel run_ordinal_fit(const LongitudinalDataset& data, int categories,
                            CorrKind kind, bool gaussian,
                            const SeriesPolicy& policy) {
    FittedModel out;
    out.copula = gaussian ? "gaussian" : "gsn";
    OrdinalModel marginal = ordinal_marginal_fit(data, categories);
    CmlFit stage2 = fit_cml_stage(data, marginal, kind, policy, gaussian);
    SandwichResult sandwich = cml_sandwich(data, marginal, stage2, policy);

    const Eigen::VectorXd theta = pack_ordinal(marginal);
    const Eigen::VectorXd phi = stage2.packed();
    out.names = sandwich.names;
    out.values.resize(theta.size() + phi.size());
    out.values << theta, phi;
    out.ses = sandwich.se;
    out.loglik = stage2.comp_loglik;
    out.n_params = marginal.n_params() + stage2.n_copula_params();
    ClaicParts parts = claic_parts(data, marginal, stage2, policy);
    out.criterion = claic(out.loglik, parts.variability, parts.sensitivity);
    out.criterion_name = "claic";
    out.floors = stage2.floored;
    out.iterations = stage2.iterations;
    out.converged = stage2.converged;
    Eigen::VectorXd per_subject =
        composite_per_subject_loglik(data, marginal, stage2, policy);
    out.per_subject.assign(per_subject.data(),
                           per_subject.data() + per_subject.size());
    return out;
}

json fitted_model_json(const FittedModel& fm) {
    json j;
    j["copula"] = fm.copula;
    j["estimates"] = estimates_json(fm.names, fm.values, fm.ses);
    j["loglik"] = fm.loglik;
    j["criteria"] = {{fm.criterion_name, fm.criterion}};
    j["n_params"] = fm.n_params;
    j["flags"] = {{"clamps", fm.clamps}, {"floors", fm.floors}};
    j["trace"] = {{"iterations", fm.iterations}, {"converged", fm.converged}};
    j["clean"] = (fm.clamps == 0 && fm.floors == 0 && fm.converged);
    return j;
}

FittedModel run_one_fit(const json& cfg, const LongitudinalDataset& data,
                        const std::string& copula, const SeriesPolicy& policy) {
    const std::string model = cfg.value("model", std::string("continuous"));
    const CorrKind kind = parse_kind(cfg.value("structure", std::string("exchangeable")));
    const bool gaussian = (copula == "gaussian");
    if (copula != "gsn" && copula != "gaussian") {
        throw ConfigError("copula must be 'gsn' or 'gaussian', got '" + copula + "'");
    }
    if (model == "continuous") {
        const std::string fam = cfg.value("family", std::string("gamma-log"));
        MarginalFamily family;
        if (fam == "gamma-log") {
            family = MarginalFamily::gamma_log;
        } else if (fam == "gaussian-identity") {
            family = MarginalFamily::gaussian_identity;
        } else {
            throw ConfigError("family must be 'gamma-log' or 'gaussian-identity'");
        }
        return run_continuous_fit(data, family, kind, gaussian, policy);
    }
    if (model == "ordinal") {
        int categories = cfg.value("categories", 0);
        if (categories == 0) {
            double max_level = 0.0;
            for (const Cluster& c : data.clusters) {
                max_level = std::max(max_level, c.y.maxCoeff());
            }
            categories = static_cast<int>(max_level);
        }
        return run_ordinal_fit(data, categories, kind, gaussian, policy);
    }
    throw ConfigError("model must be 'continuous' or 'ordinal', got '" + model + "'");
}

int cmd_fit(const GlobalOpts& opts) {
    const json cfg = load_config(opts.config_path);
    check_keys(cfg,
               {"data", "schema", "model", "family", "categories", "copula",
                "structure", "policy"},
               "fit");
    const SeriesPolicy policy = parse_policy(cfg);
    if (!cfg.contains("data")) {
        throw ConfigError("fit: missing 'data'");
    }
    LongitudinalDataset data = ingest_csv(cfg.at("data").get<std::string>(),
                                          parse_schema(cfg));
    FittedModel fm =
        run_one_fit(cfg, data, cfg.value("copula", std::string("gsn")), policy);

    json report = base_report("fit", cfg, opts);
    json model_json = fitted_model_json(fm);
    for (auto& item : model_json.items()) report[item.key()] = item.value();
    write_report(report, opts, "report.json");

    // flat CSV of the estimates
    std::ofstream est(opts.out_dir + "/estimates.csv");
    est << "name,value,se\n";
    for (size_t i = 0; i < fm.names.size(); ++i) {
        est << fm.names[i] << "," << format_double(fm.values(static_cast<int>(i)))
            << "," << format_double(fm.ses(static_cast<int>(i))) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// dependence

int cmd_dependence(const GlobalOpts& opts) {
    const json cfg = load_config(opts.config_path);
    check_keys(cfg, {"p", "mu", "rho", "contour", "curve_points", "tail_u", "policy"},
               "dependence");
    const SeriesPolicy policy = parse_policy(cfg);

    std::vector<double> ps = {0.25, 0.5, 0.75};
    if (cfg.contains("p")) {
        if (cfg.at("p").is_number()) {
            ps = {cfg.at("p").get<double>()};
        } else {
            ps = cfg.at("p").get<std::vector<double>>();
        }
    }
    std::vector<std::array<double, 2>> mus = {{-1.0, -1.0}, {0.0, 0.0}, {1.0, 1.0}};
    if (cfg.contains("mu")) {
        mus.clear();
        const json& muj = cfg.at("mu");
        if (muj.at(0).is_number()) {
            auto v = muj.get<std::vector<double>>();
            if (v.size() != 2) throw ConfigError("dependence: mu must have 2 entries");
            mus.push_back({v[0], v[1]});
        } else {
            for (const auto& row : muj) {
                auto v = row.get<std::vector<double>>();
                if (v.size() != 2) throw ConfigError("dependence: mu rows need 2 entries");
                mus.push_back({v[0], v[1]});
            }
        }
    }
    std::vector<double> rhos = {0.77};
    if (cfg.contains("rho")) {
        if (cfg.at("rho").is_number()) {
            rhos = {cfg.at("rho").get<double>()};
        } else {
            rhos = cfg.at("rho").get<std::vector<double>>();
        }
    }
    int contour_n = 41;
    double contour_range = 3.0;
    if (cfg.contains("contour")) {
        check_keys(cfg.at("contour"), {"n", "range"}, "contour");
        contour_n = cfg.at("contour").value("n", contour_n);
        contour_range = cfg.at("contour").value("range", contour_range);
    }
    const int curve_points = cfg.value("curve_points", 49);
    std::vector<double> tail_u = {1e-1, 1e-2, 1e-3, 1e-4};
    if (cfg.contains("tail_u")) tail_u = cfg.at("tail_u").get<std::vector<double>>();

    std::filesystem::create_directories(opts.out_dir);
    std::ofstream measures(opts.out_dir + "/measures.csv");
    measures << "p,mu1,mu2,rho,tau,rho_s,tau_terms,rho_terms\n";
    std::ofstream contours(opts.out_dir + "/contours.csv");
    contours << "p,mu1,mu2,rho,x,y,density\n";
    std::ofstream curves(opts.out_dir + "/curves.csv");
    curves << "p,mu1,mu2,rho,v,e_u_given_v\n";
    std::ofstream tails(opts.out_dir + "/tails.csv");
    tails << "p,mu1,mu2,rho,side,u,lambda_hat\n";

    for (double p : ps) {
        for (const auto& mu : mus) {
            for (double rho : rhos) {
                Eigen::VectorXd muv(2);
                muv << mu[0], mu[1];
                Eigen::MatrixXd s(2, 2);
                s << 1.0, rho, rho, 1.0;
                GsnParams params(p, muv, CorrelationMatrix(s));
                const std::string prefix =
                    format_double(p) + "," + format_double(mu[0]) + "," +
                    format_double(mu[1]) + "," + format_double(rho);

                DependenceReport rep = dependence_summary(params, policy);
                measures << prefix << "," << format_double(rep.tau) << ","
                         << format_double(rep.rho_s) << "," << rep.tau_terms
                         << "," << rep.rho_terms << "\n";

                // density on a lattice with standard normal margins
                for (int i = 0; i < contour_n; ++i) {
                    const double x =
                        -contour_range + 2.0 * contour_range * i / (contour_n - 1);
                    for (int j = 0; j < contour_n; ++j) {
                        const double y = -contour_range +
                                         2.0 * contour_range * j / (contour_n - 1);
                        Eigen::VectorXd uv(2);
                        uv << norm_cdf(x), norm_cdf(y);
                        const double logc = copula_log_density(uv, params, policy);
                        const double dens =
                            std::exp(logc) * norm_pdf(x) * norm_pdf(y);
                        contours << prefix << "," << format_double(x) << ","
                                 << format_double(y) << "," << format_double(dens)
                                 << "\n";
                    }
                }

                for (int i = 1; i <= curve_points; ++i) {
                    const double v = static_cast<double>(i) / (curve_points + 1);
                    curves << prefix << "," << format_double(v) << ","
                           << format_double(regression_curve(v, params, policy))
                           << "\n";
                }

                for (double u : tail_u) {
                    tails << prefix << ",lower," << format_double(u) << ","
                          << format_double(tail_coefficient_estimate(
                                 params, u, TailSide::lower, policy))
                          << "\n";
                    tails << prefix << ",upper," << format_double(u) << ","
                          << format_double(tail_coefficient_estimate(
                                 params, u, TailSide::upper, policy))
                          << "\n";
                }
            }
        }
    }
    json report = base_report("dependence", cfg, opts);
    report["outputs"] = {opts.out_dir + "/measures.csv",
                         opts.out_dir + "/contours.csv",
                         opts.out_dir + "/curves.csv",
                         opts.out_dir + "/tails.csv"};
    write_report(report, opts, "report.json");
    return 0;
}

// ---------------------------------------------------------------------------
// compare

int cmd_compare(const GlobalOpts& opts) {
    const json cfg = load_config(opts.config_path);
    check_keys(cfg,
               {"data", "schema", "model", "family", "categories", "structure",
                "copulas", "policy"},
               "compare");
    const SeriesPolicy policy = parse_policy(cfg);
    if (!cfg.contains("data")) {
        throw ConfigError("compare: missing 'data'");
    }
    std::vector<std::string> copulas = {"gsn", "gaussian"};
    if (cfg.contains("copulas")) {
        copulas = cfg.at("copulas").get<std::vector<std::string>>();
        if (copulas.size() != 2) {
            throw ConfigError("compare: 'copulas' must list exactly two models");
        }
    }
    LongitudinalDataset data = ingest_csv(cfg.at("data").get<std::string>(),
                                          parse_schema(cfg));

    FittedModel m1 = run_one_fit(cfg, data, copulas[0], policy);
    FittedModel m2 = run_one_fit(cfg, data, copulas[1], policy);
    ComparisonReport vuong = vuong_test(m1.per_subject, m2.per_subject);

    json report = base_report("compare", cfg, opts);
    report["model1"] = fitted_model_json(m1);
    report["model2"] = fitted_model_json(m2);
    std::string preferred = "indistinguishable";
    if (vuong.decision == VuongDecision::model1) preferred = copulas[0];
    if (vuong.decision == VuongDecision::model2) preferred = copulas[1];
    report["comparison"] = {
        {"mean_diff", vuong.mean_diff}, {"sd_diff", vuong.sd_diff},
        {"ci_lo", vuong.ci_lo},         {"ci_hi", vuong.ci_hi},
        {"p_value", vuong.p_value},     {"decision", to_string(vuong.decision)},
        {"preferred", preferred}};
    write_report(report, opts, "comparison.json");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geometric skew-normal copula models for longitudinal data"};
    app.require_subcommand(1);
    GlobalOpts opts;
    app.add_option("--config", opts.config_path, "path to a JSON run config")
        ->required();
    app.add_option("--seed", opts.seed, "random seed (default 20240801)");
    app.add_option("--out", opts.out_dir, "output directory (default '.')");
    app.add_option("--threads", opts.threads, "worker threads for replications");

    CLI::App* sim = app.add_subcommand("simulate", "generate datasets or replication summaries");
    CLI::App* fit = app.add_subcommand("fit", "fit a copula regression model");
    CLI::App* dep = app.add_subcommand("dependence", "dependence measures and plot grids");
    CLI::App* cmp = app.add_subcommand("compare", "fit two copulas and run the comparison test");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(opts);
        if (fit->parsed()) return cmd_fit(opts);
        if (dep->parsed()) return cmd_dependence(opts);
        if (cmp->parsed()) return cmd_compare(opts);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
