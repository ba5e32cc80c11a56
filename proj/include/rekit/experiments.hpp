#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rekit/config.hpp"
#include "rekit/recert.hpp"
#include "rekit/report.hpp"
#include "rekit/width.hpp"

namespace rekit {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each call must
/// only write to its own output slot. The first exception is rethrown after
/// all workers finish.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

/// Seed of trial i: derive_seed(master_seed, i). Streams inside a trial are
/// derived from it with fixed indices.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index);

// ---- RE / RIP two-sided bounds on a random design -------------------------

struct ReTrial {
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    double ratio_min = 0.0;  // over sampled E_s vectors, ||X delta|| / sqrt(n) with ||Sigma^{1/2} delta|| = 1
    double ratio_max = 0.0;
    double column_ratio_min = 0.0;  // ||X_j|| / sqrt(n) = ||Psi rho_j|| / sqrt(n)
    double column_ratio_max = 0.0;
    double runtime_ms = 0.0;
};

struct ReVerification {
    double theta = 0.0;
    std::vector<ReTrial> trials;

    bool es_holds(const ReTrial& t) const;
    bool columns_hold(const ReTrial& t) const;
    double es_frequency() const;
    double column_frequency() const;
    double success_frequency() const;  // both at once
};

ReVerification run_re_verification(const ExperimentConfig& cfg);

// ---- Lasso / Dantzig recovery ---------------------------------------------

enum class Estimator { lasso, dantzig };

struct RecoveryTrial {
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    double min_column_ratio = 0.0;
    double max_column_ratio = 0.0;
    double max_noise_correlation = 0.0;  // ||X^T eps / n||_inf
    double err_l2 = 0.0;
    double err_l1 = 0.0;
    double on_support_l1 = 0.0;   // ||v_S||_1
    double off_support_l1 = 0.0;  // ||v_{S^c}||_1
    bool converged = false;
    std::size_t iterations = 0;
    double kkt_residual = 0.0;
    double runtime_ms = 0.0;
};

struct Recovery {
    Estimator estimator = Estimator::lasso;
    double theta = 0.0;
    double noise_level = 0.0;  // (1 + theta) lambda_{sigma,a,p}
    double lambda_n = 0.0;
    double cone_k0 = 0.0;      // 3 for Lasso, 1 for DS
    double k_hat = 0.0;        // K(s, cone_k0, Sigma) estimate
    ErrorBounds bounds;
    std::vector<RecoveryTrial> trials;

    bool f_theta(const RecoveryTrial& t) const;
    bool t_a(const RecoveryTrial& t) const;
    bool events(const RecoveryTrial& t) const { return f_theta(t) && t_a(t); }
    bool cone(const RecoveryTrial& t) const;
    bool l2_ok(const RecoveryTrial& t) const { return t.err_l2 <= bounds.l2_bound; }
    bool l1_ok(const RecoveryTrial& t) const { return t.err_l1 <= bounds.l1_bound; }

    std::size_t event_count() const;
    /// Rates over all trials or over the event-holding trials (NaN if none).
    double cone_rate(bool conditioned) const;
    double l2_rate(bool conditioned) const;
    double l1_rate(bool conditioned) const;
    std::size_t unconverged() const;
};

Estimator estimator_for(const ExperimentConfig& cfg);
double resolve_lambda(const ExperimentConfig& cfg, Estimator estimator);
Recovery run_recovery(const ExperimentConfig& cfg);

// ---- Gaussian-design two-sided bound --------------------------------------

struct GaussTrial {
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    double norm_min = 0.0;  // min ||X delta|| over sampled E_s vectors, ||Sigma^{1/2} delta|| = 1
    double norm_max = 0.0;
    double runtime_ms = 0.0;
};

struct GaussDesignCheck {
    std::size_t n = 0;
    double theta = 0.0;
    double slack = 0.0;
    double c_bar = 0.0;
    double width_term = 0.0;  // c_bar sqrt(s ln(5ep/s))
    double tail_term = 0.0;   // sqrt(2 d ln p)
    double target_probability = 0.0;  // 1 - 4/p^d
    double threshold = 0.0;            // Gaussian-design sample size threshold
    std::vector<GaussTrial> trials;

    double predicted_lower() const;  // sqrt(n) - width_term - tail_term
    double predicted_upper() const;
    bool holds(const GaussTrial& t) const;  // (1 - theta - slack) sqrt(n) <= ||X delta|| <= (1 + theta) sqrt(n)
    double lower_margin(const GaussTrial& t) const { return t.norm_min - predicted_lower(); }
    double upper_margin(const GaussTrial& t) const { return predicted_upper() - t.norm_max; }
    double hold_frequency() const;
};

GaussDesignCheck run_gauss_design_check(const ExperimentConfig& cfg);

// ---- Widths ---------------------------------------------------------------

struct WidthRow {
    std::size_t seed_index = 0;
    std::string quantity;  // "phi", "sparse_sphere", "upsilon"
    std::size_t m = 0;
    WidthEstimate estimate;
    double bound = 0.0;
    bool within() const { return estimate.mean <= bound; }
};

struct WidthStudy {
    double k_sigma = 0.0;
    double rho_max_s = 0.0;
    double c_bar = 0.0;
    std::vector<WidthRow> rows;
    std::size_t violations() const;
};

/// cfg.trials independent seeds; sparse-sphere widths for m = 1, 2, 4, ... up to effective_m.
WidthStudy run_width(const ExperimentConfig& cfg);

// ---- Certificates ---------------------------------------------------------

struct CertificationRun {
    RECertificate covariance;
    RECertificate design;
    std::optional<EquivalenceReport> equivalence;
};

CertificationRun run_recert(const ExperimentConfig& cfg);

// ---- Sweep ----------------------------------------------------------------

struct SweepCell {
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t s = 0;
    double rho = 0.0;
    double re_success_frequency = 0.0;
    double lasso_l2_q50 = 0.0;
    double lasso_l2_q90 = 0.0;
    double cone_rate_event = 0.0;
    std::size_t unconverged = 0;
    double k_hat = 0.0;
    double rho_max_s = 0.0;
    double c_bar = 0.0;
    double threshold = 0.0;
    std::string error;  // empty unless the cell failed
};

std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg);

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

// ---- Reports --------------------------------------------------------------

Report to_report(const ExperimentConfig& cfg, const ReVerification& result);
Report to_report(const ExperimentConfig& cfg, const Recovery& result);
Report to_report(const ExperimentConfig& cfg, const GaussDesignCheck& result);
Report to_report(const ExperimentConfig& cfg, const WidthStudy& result);
Report to_report(const ExperimentConfig& cfg, const CertificationRun& result);
Report to_report(const ExperimentConfig& cfg, const std::vector<SweepCell>& result);

/// Validates cfg, dispatches on cfg.experiment and builds the report.
Report run_experiment(const ExperimentConfig& cfg);

}  // namespace rekit
