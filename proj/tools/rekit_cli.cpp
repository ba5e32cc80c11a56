#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "rekit/config.hpp"
#include "rekit/errors.hpp"
#include "rekit/experiments.hpp"
#include "rekit/report.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> threads;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::string estimator;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON configuration file");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--trials", o.trials, "number of trials (seeds for width)");
    cmd->add_option("--threads", o.threads, "worker threads");
    cmd->add_option("--out", o.out, "output path, '-' for stdout");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

rekit::ExperimentKind kind_for(const std::string& sub, const Overrides& o, rekit::ExperimentKind from_file) {
    using rekit::ExperimentKind;
    if (sub == "recert") return ExperimentKind::recert;
    if (sub == "re-verify") return ExperimentKind::re_verify;
    if (sub == "width") return ExperimentKind::width;
    if (sub == "sweep") return ExperimentKind::sweep;
    if (sub == "gauss-check") return ExperimentKind::gauss_design;
    if (o.estimator == "ds") return ExperimentKind::recover_ds;
    if (o.estimator == "lasso") return ExperimentKind::recover_lasso;
    return from_file == ExperimentKind::recover_ds ? ExperimentKind::recover_ds : ExperimentKind::recover_lasso;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Restricted eigenvalue certification and sparse recovery experiments"};
    app.require_subcommand(1);
    Overrides o;
    const std::pair<const char*, const char*> commands[] = {
        {"recert", "certify RE constants of the covariance and of one sampled design"},
        {"re-verify", "check the two-sided RE bound on random designs"},
        {"recover", "Lasso or Dantzig recovery trials against the error bounds"},
        {"width", "Gaussian width estimates against their bounds"},
        {"sweep", "RE success and Lasso error over an (n, p, s, rho) grid"},
        {"gauss-check", "two-sided bound for Gaussian designs"},
    };
    for (const auto& [name, help] : commands) {
        auto* cmd = app.add_subcommand(name, help);
        add_common(cmd, o);
        if (std::string(name) == "recover")
            cmd->add_option("--estimator", o.estimator, "lasso or ds")->check(CLI::IsMember({"lasso", "ds"}));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        rekit::ExperimentConfig cfg = o.config_path.empty() ? rekit::ExperimentConfig{} : rekit::load_config(o.config_path);
        cfg.experiment = kind_for(sub, o, cfg.experiment);
        if (o.seed) cfg.master_seed = *o.seed;
        if (o.trials) cfg.trials = *o.trials;
        if (o.threads) cfg.threads = *o.threads;
        if (o.out) cfg.out_path = *o.out;
        if (o.format) cfg.format = *o.format == "csv" ? rekit::OutputFormat::csv : rekit::OutputFormat::json;

        const rekit::Report report = rekit::run_experiment(cfg);
        rekit::write_report(report, cfg.out_path, cfg.format);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 2;
    } catch (const rekit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
