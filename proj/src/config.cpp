#include "rekit/config.hpp"

#include <fstream>
#include <set>

#include "rekit/errors.hpp"

namespace rekit {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::recert: return "recert";
        case ExperimentKind::re_verify: return "re-verify";
        case ExperimentKind::recover_lasso: return "recover-lasso";
        case ExperimentKind::recover_ds: return "recover-ds";
        case ExperimentKind::width: return "width";
        case ExperimentKind::sweep: return "sweep";
        case ExperimentKind::gauss_design: return "gauss-design";
    }
    return "recert";
}

ExperimentKind experiment_from_string(const std::string& name) {
    for (auto k : {ExperimentKind::recert, ExperimentKind::re_verify, ExperimentKind::recover_lasso,
                   ExperimentKind::recover_ds, ExperimentKind::width, ExperimentKind::sweep,
                   ExperimentKind::gauss_design})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown experiment '" + name + "'");
}

std::string to_string(LambdaRule rule) {
    switch (rule) {
        case LambdaRule::paper: return "paper";
        case LambdaRule::paper_lasso: return "paper-lasso";
        case LambdaRule::paper_ds: return "paper-ds";
        case LambdaRule::explicit_value: return "explicit";
    }
    return "paper-lasso";
}

LambdaRule lambda_rule_from_string(const std::string& name) {
    if (name == "paper") return LambdaRule::paper;
    if (name == "paper-lasso") return LambdaRule::paper_lasso;
    if (name == "paper-ds") return LambdaRule::paper_ds;
    if (name == "explicit") return LambdaRule::explicit_value;
    throw ConfigError("unknown lambda_rule '" + name + "'");
}

void ExperimentConfig::validate() const {
    theory.validate();
    if (p < 2) throw ConfigError("p must be at least 2");
    if (n < 1) throw ConfigError("n must be at least 1");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    if (s < 1) throw ConfigError("s must be at least 1");
    if (!(k0 > 0.0)) throw ConfigError("k0 must be positive");
    const bool needs_half = experiment != ExperimentKind::sweep;
    if (needs_half && 2 * s > p) throw ConfigError("s must satisfy s <= p/2");
    if (m != 0 && (m < s || s + m > p)) throw ConfigError("m must satisfy s <= m and s + m <= p");
    if (lambda_rule == LambdaRule::explicit_value && !(lambda_value >= 0.0))
        throw ConfigError("explicit lambda must be non-negative");
    if (experiment == ExperimentKind::recover_lasso && lambda_rule == LambdaRule::paper_ds)
        throw ConfigError("paper-ds lambda is below the level the lasso guarantee requires");
    if (experiment == ExperimentKind::gauss_design && ensemble.tag != EnsembleTag::gaussian)
        throw ConfigError("gauss-design requires the gaussian ensemble");
    if (experiment == ExperimentKind::sweep) {
        if (grid.n.empty() || grid.p.empty() || grid.s.empty())
            throw ConfigError("sweep requires non-empty grid.n, grid.p and grid.s");
        for (std::size_t pv : grid.p)
            for (std::size_t sv : grid.s)
                if (pv < 2 || sv < 1 || 2 * sv > pv) throw ConfigError("sweep grid needs 1 <= s <= p/2 in every cell");
        for (std::size_t nv : grid.n)
            if (nv < 1) throw ConfigError("sweep grid n must be positive");
    }
    if (inner_samples < 1 || gaussian_trials < 1 || restarts < 1) throw ConfigError("sample counts must be positive");
    // model parameters are checked by make_covariance
    try {
        make_covariance(p, model);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) {
        try {
            out = obj.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
        }
    }
}

json matrix_to_json(const SymMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    reject_unknown(doc,
                   {"experiment", "n", "p", "s", "m", "k0", "model", "ensemble", "psi2_alpha", "signal", "trials",
                    "threads", "theta", "a", "sigma", "lambda_rule", "lambda", "master_seed", "theory",
                    "inner_samples", "gaussian_trials", "width_inner_samples", "restarts", "max_iterations",
                    "estimation_slack", "gauss_slack", "record_timing", "grid", "out", "format"},
                   "configuration");
    ExperimentConfig cfg;
    if (doc.contains("experiment")) cfg.experiment = experiment_from_string(doc.at("experiment").get<std::string>());
    read(doc, "n", cfg.n);
    read(doc, "p", cfg.p);
    read(doc, "s", cfg.s);
    read(doc, "m", cfg.m);
    read(doc, "k0", cfg.k0);
    read(doc, "trials", cfg.trials);
    read(doc, "threads", cfg.threads);
    read(doc, "master_seed", cfg.master_seed);
    read(doc, "inner_samples", cfg.inner_samples);
    read(doc, "gaussian_trials", cfg.gaussian_trials);
    read(doc, "width_inner_samples", cfg.width_inner_samples);
    read(doc, "restarts", cfg.restarts);
    read(doc, "max_iterations", cfg.max_iterations);
    read(doc, "estimation_slack", cfg.estimation_slack);
    read(doc, "gauss_slack", cfg.gauss_slack);
    read(doc, "record_timing", cfg.record_timing);
    read(doc, "out", cfg.out_path);

    if (doc.contains("model")) {
        const json& m = doc.at("model");
        if (m.is_string()) {
            try {
                cfg.model.kind = covariance_kind_from_string(m.get<std::string>());
            } catch (const ModelError& e) {
                throw ConfigError(e.what());
            }
        } else {
            reject_unknown(m, {"kind", "rho", "matrix"}, "model");
            std::string kind = "identity";
            read(m, "kind", kind);
            try {
                cfg.model.kind = covariance_kind_from_string(kind);
            } catch (const ModelError& e) {
                throw ConfigError(e.what());
            }
            read(m, "rho", cfg.model.rho);
            if (m.contains("matrix")) {
                const auto rows = m.at("matrix").get<std::vector<std::vector<double>>>();
                Matrix mat(rows.size(), rows.size());
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    if (rows[i].size() != rows.size()) throw ConfigError("model.matrix must be square");
                    for (std::size_t j = 0; j < rows.size(); ++j) mat(i, j) = rows[i][j];
                }
                try {
                    cfg.model.matrix = SymMatrix(std::move(mat));
                } catch (const std::exception& e) {
                    throw ConfigError(std::string("model.matrix: ") + e.what());
                }
            }
        }
    }
    if (doc.contains("ensemble")) {
        try {
            cfg.ensemble = EnsembleKind::from_tag(ensemble_from_string(doc.at("ensemble").get<std::string>()));
        } catch (const ModelError& e) {
            throw ConfigError(e.what());
        }
    }
    read(doc, "psi2_alpha", cfg.ensemble.psi2_alpha);
    if (doc.contains("signal")) {
        const json& sig = doc.at("signal");
        reject_unknown(sig, {"scheme", "amplitude"}, "signal");
        std::string scheme = "constant";
        read(sig, "scheme", scheme);
        if (scheme == "constant")
            cfg.signal.scheme = AmplitudeScheme::constant;
        else if (scheme == "uniform")
            cfg.signal.scheme = AmplitudeScheme::uniform;
        else
            throw ConfigError("unknown signal scheme '" + scheme + "'");
        read(sig, "amplitude", cfg.signal.amplitude);
    }
    if (doc.contains("theory")) {
        const json& t = doc.at("theory");
        reject_unknown(t, {"sigma_noise", "a", "theta", "alpha_psi2", "c_prime", "c_bar_abs", "d"}, "theory");
        read(t, "sigma_noise", cfg.theory.sigma_noise);
        read(t, "a", cfg.theory.a);
        read(t, "theta", cfg.theory.theta);
        read(t, "alpha_psi2", cfg.theory.alpha_psi2);
        read(t, "c_prime", cfg.theory.c_prime);
        read(t, "c_bar_abs", cfg.theory.c_bar_abs);
        read(t, "d", cfg.theory.d);
    }
    // top-level shorthands win over the theory block
    read(doc, "theta", cfg.theory.theta);
    read(doc, "a", cfg.theory.a);
    read(doc, "sigma", cfg.theory.sigma_noise);

    if (doc.contains("lambda_rule")) cfg.lambda_rule = lambda_rule_from_string(doc.at("lambda_rule").get<std::string>());
    if (doc.contains("lambda")) {
        read(doc, "lambda", cfg.lambda_value);
        if (!doc.contains("lambda_rule")) cfg.lambda_rule = LambdaRule::explicit_value;
    }
    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        reject_unknown(g, {"n", "p", "s", "rho"}, "grid");
        read(g, "n", cfg.grid.n);
        read(g, "p", cfg.grid.p);
        read(g, "s", cfg.grid.s);
        read(g, "rho", cfg.grid.rho);
    }
    if (doc.contains("format")) {
        const auto f = doc.at("format").get<std::string>();
        if (f == "csv")
            cfg.format = OutputFormat::csv;
        else if (f == "json")
            cfg.format = OutputFormat::json;
        else
            throw ConfigError("format must be csv or json");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return config_from_json(doc);
}

json config_to_json(const ExperimentConfig& cfg) {
    json model = {{"kind", to_string(cfg.model.kind)}, {"rho", cfg.model.rho}};
    if (cfg.model.matrix) model["matrix"] = matrix_to_json(*cfg.model.matrix);
    json doc = {
        {"experiment", to_string(cfg.experiment)},
        {"n", cfg.n},
        {"p", cfg.p},
        {"s", cfg.s},
        {"m", cfg.m},
        {"k0", cfg.k0},
        {"model", model},
        {"ensemble", to_string(cfg.ensemble.tag)},
        {"psi2_alpha", cfg.ensemble.psi2_alpha},
        {"signal",
         {{"scheme", cfg.signal.scheme == AmplitudeScheme::constant ? "constant" : "uniform"},
          {"amplitude", cfg.signal.amplitude}}},
        {"trials", cfg.trials},
        {"threads", cfg.threads},
        {"lambda_rule", to_string(cfg.lambda_rule)},
        {"lambda", cfg.lambda_value},
        {"master_seed", cfg.master_seed},
        {"theory",
         {{"sigma_noise", cfg.theory.sigma_noise},
          {"a", cfg.theory.a},
          {"theta", cfg.theory.theta},
          {"alpha_psi2", cfg.theory.alpha_psi2},
          {"c_prime", cfg.theory.c_prime},
          {"c_bar_abs", cfg.theory.c_bar_abs},
          {"d", cfg.theory.d}}},
        {"inner_samples", cfg.inner_samples},
        {"gaussian_trials", cfg.gaussian_trials},
        {"width_inner_samples", cfg.width_inner_samples},
        {"restarts", cfg.restarts},
        {"max_iterations", cfg.max_iterations},
        {"estimation_slack", cfg.estimation_slack},
        {"gauss_slack", cfg.gauss_slack},
        {"record_timing", cfg.record_timing},
        {"grid", {{"n", cfg.grid.n}, {"p", cfg.grid.p}, {"s", cfg.grid.s}, {"rho", cfg.grid.rho}}},
        {"out", cfg.out_path},
        {"format", cfg.format == OutputFormat::csv ? "csv" : "json"},
    };
    return doc;
}

}  // namespace rekit
