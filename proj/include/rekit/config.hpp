#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rekit/bounds.hpp"
#include "rekit/model.hpp"

namespace rekit {

enum class ExperimentKind { recert, re_verify, recover_lasso, recover_ds, width, sweep, gauss_design };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);

/// paper picks paper_lasso or paper_ds from the estimator.
enum class LambdaRule { paper, paper_lasso, paper_ds, explicit_value };

std::string to_string(LambdaRule rule);
LambdaRule lambda_rule_from_string(const std::string& name);

enum class OutputFormat { csv, json };

struct SweepGrid {
    std::vector<std::size_t> n;
    std::vector<std::size_t> p;
    std::vector<std::size_t> s;
    std::vector<double> rho;
};

/// Fully resolved experiment description. Every field has a default, so an
/// empty JSON document is a valid (recert) configuration.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::recert;
    std::size_t n = 400;
    std::size_t p = 64;
    std::size_t s = 4;
    std::size_t m = 0;  // 0 means m = s
    double k0 = 1.0;
    CovarianceSpec model = CovarianceSpec::identity();
    EnsembleKind ensemble = EnsembleKind::gaussian();
    SignalSpec signal;
    std::size_t trials = 100;
    std::size_t threads = 1;
    LambdaRule lambda_rule = LambdaRule::paper;
    double lambda_value = 0.0;
    std::uint64_t master_seed = 1;
    TheoryConfig theory;

    std::size_t inner_samples = 256;       // E_s vectors per trial
    std::size_t gaussian_trials = 2000;    // width estimators
    std::size_t width_inner_samples = 512;
    std::size_t restarts = 64;             // cone minimization
    std::size_t max_iterations = 500;
    double estimation_slack = 0.05;        // RE estimate comparisons
    double gauss_slack = 0.05;             // o(1) term of the Gaussian-design bound
    bool record_timing = false;            // per-trial runtime column (not reproducible)

    SweepGrid grid;

    std::string out_path;
    OutputFormat format = OutputFormat::json;

    std::size_t effective_m() const { return m == 0 ? s : m; }

    /// Throws ConfigError on inconsistent values.
    void validate() const;
};

/// Parses a configuration document; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace rekit
