#include "rekit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "rekit/bounds.hpp"
#include "rekit/cone.hpp"
#include "rekit/errors.hpp"
#include "rekit/solvers.hpp"

namespace rekit {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Setup streams sit far above any trial index.
constexpr std::uint64_t kSetupStream = 1ull << 48;

enum : std::uint64_t { kDesignStream = 1, kSignalStream = 2, kNoiseStream = 3, kSampleStream = 4 };

SearchBudget budget_for(const ExperimentConfig& cfg, std::uint64_t stream) {
    SearchBudget b;
    b.restarts = cfg.restarts;
    b.max_iterations = cfg.max_iterations;
    b.seed = derive_seed(cfg.master_seed, kSetupStream + stream);
    return b;
}

EnumerationOptions enumeration_for(const ExperimentConfig& cfg, std::uint64_t stream) {
    EnumerationOptions o;
    o.seed = derive_seed(cfg.master_seed, kSetupStream + stream);
    return o;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

double frequency(std::size_t hits, std::size_t total) {
    return total == 0 ? kNaN : static_cast<double>(hits) / static_cast<double>(total);
}

double sqrt_n(std::size_t n) { return std::sqrt(static_cast<double>(n)); }

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }
std::int64_t as_int(std::uint64_t v, int) { return static_cast<std::int64_t>(v); }

std::pair<double, double> column_ratio_range(const Matrix& x) {
    Vector sq(x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto r = x.row(i);
        for (std::size_t j = 0; j < x.cols(); ++j) sq[j] += r[j] * r[j];
    }
    const auto [lo, hi] = std::minmax_element(sq.begin(), sq.end());
    return {std::sqrt(*lo) / sqrt_n(x.rows()), std::sqrt(*hi) / sqrt_n(x.rows())};
}

// c_bar from K(s, k0, Sigma) and rho_max(s) of the configured model.
struct CBar {
    double k_sigma = 0.0;
    double rho_max_s = 0.0;
    double value = 0.0;
};

CBar compute_c_bar(const ExperimentConfig& cfg, const CovarianceModel& model) {
    CBar out;
    out.k_sigma = re_constant(model.sigma, cfg.s, cfg.k0, budget_for(cfg, 10)).k_est();
    out.rho_max_s = restricted_eigen_range(model.sigma, cfg.s, enumeration_for(cfg, 11)).rho_max;
    out.value = c_bar(cfg.k0, out.k_sigma, out.rho_max_s);
    return out;
}

}  // namespace

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index) {
    return derive_seed(master_seed, trial_index);
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return kNaN;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

// ---- RE verification ------------------------------------------------------

bool ReVerification::es_holds(const ReTrial& t) const {
    return t.ratio_min >= 1.0 - theta && t.ratio_max <= 1.0 + theta;
}

bool ReVerification::columns_hold(const ReTrial& t) const {
    return t.column_ratio_min >= 1.0 - theta && t.column_ratio_max <= 1.0 + theta;
}

double ReVerification::es_frequency() const {
    return frequency(std::count_if(trials.begin(), trials.end(), [&](const auto& t) { return es_holds(t); }),
                     trials.size());
}

double ReVerification::column_frequency() const {
    return frequency(std::count_if(trials.begin(), trials.end(), [&](const auto& t) { return columns_hold(t); }),
                     trials.size());
}

double ReVerification::success_frequency() const {
    return frequency(std::count_if(trials.begin(), trials.end(),
                                   [&](const auto& t) { return es_holds(t) && columns_hold(t); }),
                     trials.size());
}

ReVerification run_re_verification(const ExperimentConfig& cfg) {
    const CovarianceModel model = make_covariance(cfg.p, cfg.model);
    ReVerification out;
    out.theta = cfg.theory.theta;
    out.trials.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        ReTrial& t = out.trials[i];
        t.trial_index = i;
        t.seed = trial_seed(cfg.master_seed, i);
        const DesignSample design = sample_design(cfg.n, model, cfg.ensemble, derive_seed(t.seed, kDesignStream));
        const double root_n = sqrt_n(cfg.n);
        Rng rng(derive_seed(t.seed, kSampleStream));
        t.ratio_min = std::numeric_limits<double>::infinity();
        t.ratio_max = 0.0;
        for (std::size_t k = 0; k < cfg.inner_samples; ++k) {
            const Vector delta = sample_Es(model, cfg.s, cfg.k0, rng);
            const double r = norm2(mat_vec(design.x, delta)) / root_n;
            t.ratio_min = std::min(t.ratio_min, r);
            t.ratio_max = std::max(t.ratio_max, r);
        }
        std::tie(t.column_ratio_min, t.column_ratio_max) = column_ratio_range(design.x);
        t.runtime_ms = elapsed_ms(start);
    });
    return out;
}

// ---- Recovery -------------------------------------------------------------

bool Recovery::f_theta(const RecoveryTrial& t) const {
    return t.min_column_ratio >= 1.0 - theta && t.max_column_ratio <= 1.0 + theta;
}

bool Recovery::t_a(const RecoveryTrial& t) const { return t.max_noise_correlation <= noise_level; }

bool Recovery::cone(const RecoveryTrial& t) const {
    return t.off_support_l1 <= cone_k0 * t.on_support_l1 * (1.0 + kConeSlack) + 1e-12;
}

std::size_t Recovery::event_count() const {
    return std::count_if(trials.begin(), trials.end(), [&](const auto& t) { return events(t); });
}

namespace {
template <class Pred>
double conditional_rate(const Recovery& r, bool conditioned, Pred pred) {
    std::size_t hits = 0;
    std::size_t total = 0;
    for (const auto& t : r.trials) {
        if (conditioned && !r.events(t)) continue;
        ++total;
        if (pred(t)) ++hits;
    }
    return frequency(hits, total);
}
}  // namespace

double Recovery::cone_rate(bool conditioned) const {
    return conditional_rate(*this, conditioned, [&](const auto& t) { return cone(t); });
}
double Recovery::l2_rate(bool conditioned) const {
    return conditional_rate(*this, conditioned, [&](const auto& t) { return l2_ok(t); });
}
double Recovery::l1_rate(bool conditioned) const {
    return conditional_rate(*this, conditioned, [&](const auto& t) { return l1_ok(t); });
}
std::size_t Recovery::unconverged() const {
    return std::count_if(trials.begin(), trials.end(), [](const auto& t) { return !t.converged; });
}

Estimator estimator_for(const ExperimentConfig& cfg) {
    return cfg.experiment == ExperimentKind::recover_ds ? Estimator::dantzig : Estimator::lasso;
}

double resolve_lambda(const ExperimentConfig& cfg, Estimator estimator) {
    const double base = lambda_noise(cfg.theory.sigma_noise, cfg.theory.a, cfg.p, cfg.n);
    const double scale = 1.0 + cfg.theory.theta;
    switch (cfg.lambda_rule) {
        case LambdaRule::paper: return (estimator == Estimator::lasso ? 2.0 : 1.0) * scale * base;
        case LambdaRule::paper_lasso: return 2.0 * scale * base;
        case LambdaRule::paper_ds: return scale * base;
        case LambdaRule::explicit_value: return cfg.lambda_value;
    }
    return 2.0 * scale * base;
}

Recovery run_recovery(const ExperimentConfig& cfg) {
    const CovarianceModel model = make_covariance(cfg.p, cfg.model);
    Recovery out;
    out.estimator = estimator_for(cfg);
    out.theta = cfg.theory.theta;
    out.noise_level = (1.0 + cfg.theory.theta) * lambda_noise(cfg.theory.sigma_noise, cfg.theory.a, cfg.p, cfg.n);
    out.lambda_n = resolve_lambda(cfg, out.estimator);
    out.cone_k0 = out.estimator == Estimator::lasso ? 3.0 : 1.0;
    out.k_hat = re_constant(model.sigma, cfg.s, out.cone_k0, budget_for(cfg, 20)).k_est();
    out.bounds = out.estimator == Estimator::lasso ? error_bounds_lasso(cfg.s, out.lambda_n, out.k_hat, out.theta)
                                                   : error_bounds_ds(cfg.s, out.lambda_n, out.k_hat, out.theta);
    out.trials.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        RecoveryTrial& t = out.trials[i];
        t.trial_index = i;
        t.seed = trial_seed(cfg.master_seed, i);
        DesignSample design = sample_design(cfg.n, model, cfg.ensemble, derive_seed(t.seed, kDesignStream));
        Vector beta = sample_sparse_signal(cfg.p, cfg.s, cfg.signal, derive_seed(t.seed, kSignalStream));
        Vector eps = sample_noise(cfg.n, cfg.theory.sigma_noise, derive_seed(t.seed, kNoiseStream));
        const RecoveryInstance inst =
            make_recovery_instance(std::move(design.x), std::move(beta), std::move(eps), cfg.theory.sigma_noise);

        const EventFlags flags =
            check_events(inst.design, inst.noise, cfg.theory.theta, cfg.theory.a, cfg.theory.sigma_noise);
        t.min_column_ratio = flags.min_column_ratio;
        t.max_column_ratio = flags.max_column_ratio;
        t.max_noise_correlation = flags.max_noise_correlation;

        const SolverResult fit = out.estimator == Estimator::lasso ? lasso(inst.design, inst.observed, out.lambda_n)
                                                                   : dantzig(inst.design, inst.observed, out.lambda_n);
        t.converged = fit.converged;
        t.iterations = fit.iterations;
        t.kkt_residual = fit.kkt_residual;
        for (std::size_t j = 0; j < cfg.p; ++j) {
            const double v = fit.beta_hat[j] - inst.signal[j];
            t.err_l2 += v * v;
            (inst.signal[j] != 0.0 ? t.on_support_l1 : t.off_support_l1) += std::abs(v);
        }
        t.err_l2 = std::sqrt(t.err_l2);
        t.err_l1 = t.on_support_l1 + t.off_support_l1;
        t.runtime_ms = elapsed_ms(start);
    });
    return out;
}

// ---- Gaussian design ------------------------------------------------------

double GaussDesignCheck::predicted_lower() const { return sqrt_n(n) - width_term - tail_term; }
double GaussDesignCheck::predicted_upper() const { return sqrt_n(n) + width_term + tail_term; }

bool GaussDesignCheck::holds(const GaussTrial& t) const {
    return t.norm_min >= (1.0 - theta - slack) * sqrt_n(n) && t.norm_max <= (1.0 + theta) * sqrt_n(n);
}

double GaussDesignCheck::hold_frequency() const {
    return frequency(std::count_if(trials.begin(), trials.end(), [&](const auto& t) { return holds(t); }),
                     trials.size());
}

GaussDesignCheck run_gauss_design_check(const ExperimentConfig& cfg) {
    if (cfg.ensemble.tag != EnsembleTag::gaussian) throw ConfigError("gauss-design requires the gaussian ensemble");
    const CovarianceModel model = make_covariance(cfg.p, cfg.model);
    const CBar cb = compute_c_bar(cfg, model);
    const double pd = static_cast<double>(cfg.p);
    const double sd = static_cast<double>(cfg.s);

    GaussDesignCheck out;
    out.n = cfg.n;
    out.theta = cfg.theory.theta;
    out.slack = cfg.gauss_slack;
    out.c_bar = cb.value;
    out.width_term = cb.value * std::sqrt(sd * std::log(5.0 * std::numbers::e * pd / sd));
    out.tail_term = std::sqrt(2.0 * cfg.theory.d * std::log(pd));
    out.target_probability = 1.0 - 4.0 / std::pow(pd, cfg.theory.d);
    out.threshold = sample_size_threshold_gaussian(cfg.s, cfg.p, cfg.theory.theta, cb.value, cfg.theory.d);
    out.trials.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        GaussTrial& t = out.trials[i];
        t.trial_index = i;
        t.seed = trial_seed(cfg.master_seed, i);
        const DesignSample design = sample_design(cfg.n, model, cfg.ensemble, derive_seed(t.seed, kDesignStream));
        Rng rng(derive_seed(t.seed, kSampleStream));
        t.norm_min = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cfg.inner_samples; ++k) {
            const Vector delta = sample_Es(model, cfg.s, cfg.k0, rng);
            const double r = norm2(mat_vec(design.x, delta));
            t.norm_min = std::min(t.norm_min, r);
            t.norm_max = std::max(t.norm_max, r);
        }
        t.runtime_ms = elapsed_ms(start);
    });
    return out;
}

// ---- Widths ---------------------------------------------------------------

std::size_t WidthStudy::violations() const {
    return std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.within(); });
}

WidthStudy run_width(const ExperimentConfig& cfg) {
    const CovarianceModel model = make_covariance(cfg.p, cfg.model);
    const CBar cb = compute_c_bar(cfg, model);
    WidthStudy out;
    out.k_sigma = cb.k_sigma;
    out.rho_max_s = cb.rho_max_s;
    out.c_bar = cb.value;

    std::vector<std::size_t> ms;
    for (std::size_t m = 1; m < cfg.effective_m(); m *= 2) ms.push_back(m);
    ms.push_back(std::min(cfg.effective_m(), cfg.p));
    std::vector<double> rho_max_m;
    for (std::size_t k = 0; k < ms.size(); ++k)
        rho_max_m.push_back(restricted_eigen_range(model.sigma, ms[k], enumeration_for(cfg, 30 + k)).rho_max);

    const std::size_t per_seed = 2 + ms.size();
    std::vector<WidthRow> rows(cfg.trials * per_seed);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        const std::uint64_t seed = trial_seed(cfg.master_seed, i);
        WidthRow* slot = &rows[i * per_seed];
        slot[0] = {i, "phi", 1, ell_star_phi_mc(model, cfg.gaussian_trials, derive_seed(seed, 1)),
                   phi_width_bound(cfg.p)};
        for (std::size_t k = 0; k < ms.size(); ++k)
            slot[1 + k] = {i, "sparse_sphere", ms[k],
                           ell_star_sparse_sphere_mc(model, ms[k], cfg.gaussian_trials, derive_seed(seed, 100 + k)),
                           sparse_sphere_width_bound(ms[k], cfg.p, rho_max_m[k])};
        slot[per_seed - 1] = {i, "upsilon", cfg.s,
                              ell_star_upsilon_mc(model, cfg.s, cfg.k0, cfg.width_inner_samples, cfg.gaussian_trials,
                                                  derive_seed(seed, 2)),
                              upsilon_width_bound(cb.value, cfg.s, cfg.p)};
    });
    out.rows = std::move(rows);
    return out;
}

// ---- Certificates ---------------------------------------------------------

CertificationRun run_recert(const ExperimentConfig& cfg) {
    const CovarianceModel model = make_covariance(cfg.p, cfg.model);
    CertificationRun out;
    out.covariance = certify_covariance(model.sigma, cfg.s, cfg.k0, budget_for(cfg, 40), enumeration_for(cfg, 41));
    const DesignSample design =
        sample_design(cfg.n, model, cfg.ensemble, derive_seed(cfg.master_seed, kSetupStream + 42));
    out.design = certify_design(design.x, cfg.s, cfg.k0, budget_for(cfg, 43), enumeration_for(cfg, 44));
    const std::size_t m = cfg.effective_m();
    if (m >= cfg.s && cfg.s + m <= cfg.p)
        out.equivalence = verify_re_equivalences(model.sigma, cfg.s, m, cfg.k0, budget_for(cfg, 45), cfg.estimation_slack);
    return out;
}

// ---- Sweep ----------------------------------------------------------------

std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg) {
    std::vector<double> rhos = cfg.grid.rho;
    if (rhos.empty()) rhos.push_back(cfg.model.rho);
    std::vector<SweepCell> cells;
    for (std::size_t n : cfg.grid.n)
        for (std::size_t p : cfg.grid.p)
            for (std::size_t s : cfg.grid.s)
                for (double rho : rhos) {
                    SweepCell cell;
                    cell.n = n;
                    cell.p = p;
                    cell.s = s;
                    cell.rho = cfg.model.kind == CovarianceKind::identity ? 0.0 : rho;
                    ExperimentConfig c = cfg;
                    c.n = n;
                    c.p = p;
                    c.s = s;
                    c.m = 0;
                    c.grid = {};
                    if (c.model.kind != CovarianceKind::identity) c.model.rho = rho;
                    try {
                        c.experiment = ExperimentKind::re_verify;
                        c.validate();
                        cell.re_success_frequency = run_re_verification(c).success_frequency();

                        c.experiment = ExperimentKind::recover_lasso;
                        if (c.lambda_rule == LambdaRule::paper_ds) c.lambda_rule = LambdaRule::paper;
                        const Recovery rec = run_recovery(c);
                        std::vector<double> errors;
                        for (const auto& t : rec.trials) errors.push_back(t.err_l2);
                        cell.lasso_l2_q50 = quantile(errors, 0.5);
                        cell.lasso_l2_q90 = quantile(errors, 0.9);
                        cell.cone_rate_event = rec.cone_rate(true);
                        cell.unconverged = rec.unconverged();
                        cell.k_hat = rec.k_hat;

                        const CBar cb = compute_c_bar(c, make_covariance(c.p, c.model));
                        cell.rho_max_s = cb.rho_max_s;
                        cell.c_bar = cb.value;
                        cell.threshold = sample_size_threshold(s, p, c.theory.theta, c.theory.alpha_psi2, cb.value,
                                                               c.theory.c_prime);
                    } catch (const std::exception& e) {
                        cell.error = e.what();
                        for (char& ch : cell.error)
                            if (ch == ',' || ch == '\n') ch = ';';
                    }
                    cells.push_back(std::move(cell));
                }
    return cells;
}

// ---- Reports --------------------------------------------------------------

namespace {

Report base_report(const ExperimentConfig& cfg, std::vector<std::string> columns) {
    Report r;
    r.experiment = to_string(cfg.experiment);
    r.meta = make_meta(cfg);
    r.table.columns = std::move(columns);
    if (cfg.record_timing) r.table.columns.push_back("runtime_ms");
    return r;
}

void push_row(Report& r, const ExperimentConfig& cfg, std::vector<Cell> row, double runtime_ms) {
    if (cfg.record_timing) row.emplace_back(runtime_ms);
    r.table.add_row(std::move(row));
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Report to_report(const ExperimentConfig& cfg, const ReVerification& res) {
    Report r = base_report(cfg, {"trial_index", "seed", "ratio_min", "ratio_max", "column_ratio_min",
                                 "column_ratio_max", "lower_limit", "upper_limit", "es_holds", "columns_hold"});
    for (const auto& t : res.trials)
        push_row(r, cfg,
                 {as_int(t.trial_index), std::to_string(t.seed), t.ratio_min, t.ratio_max, t.column_ratio_min,
                  t.column_ratio_max, 1.0 - res.theta, 1.0 + res.theta, res.es_holds(t), res.columns_hold(t)},
                 t.runtime_ms);
    r.summary = {{"trials", res.trials.size()},
                 {"theta", res.theta},
                 {"es_frequency", num(res.es_frequency())},
                 {"column_frequency", num(res.column_frequency())},
                 {"success_frequency", num(res.success_frequency())},
                 {"design_event_probability_formula",
                  design_event_probability(cfg.n, cfg.theory.theta, cfg.theory.alpha_psi2, cfg.theory.c_bar_abs)}};
    return r;
}

Report to_report(const ExperimentConfig& cfg, const Recovery& res) {
    Report r = base_report(cfg, {"trial_index", "seed", "min_column_ratio", "max_column_ratio",
                                 "max_noise_correlation", "noise_level", "f_theta", "t_a", "lambda_n", "err_l2",
                                 "err_l1", "on_support_l1", "off_support_l1", "cone_k0", "cone_holds", "l2_bound",
                                 "l1_bound", "l2_within", "l1_within", "converged", "iterations", "kkt_residual"});
    for (const auto& t : res.trials)
        push_row(r, cfg,
                 {as_int(t.trial_index), std::to_string(t.seed), t.min_column_ratio, t.max_column_ratio,
                  t.max_noise_correlation, res.noise_level, res.f_theta(t), res.t_a(t), res.lambda_n, t.err_l2,
                  t.err_l1, t.on_support_l1, t.off_support_l1, res.cone_k0, res.cone(t), res.bounds.l2_bound,
                  res.bounds.l1_bound, res.l2_ok(t), res.l1_ok(t), t.converged, as_int(t.iterations),
                  t.kkt_residual},
                 t.runtime_ms);
    r.summary = {{"estimator", res.estimator == Estimator::lasso ? "lasso" : "dantzig"},
                 {"trials", res.trials.size()},
                 {"event_trials", res.event_count()},
                 {"lambda_n", res.lambda_n},
                 {"k_hat", res.k_hat},
                 {"k_hat_direction", kRatioDirection},
                 {"B", res.bounds.B},
                 {"l2_bound", res.bounds.l2_bound},
                 {"l1_bound", res.bounds.l1_bound},
                 {"cone_rate_all", num(res.cone_rate(false))},
                 {"cone_rate_event", num(res.cone_rate(true))},
                 {"l2_rate_all", num(res.l2_rate(false))},
                 {"l2_rate_event", num(res.l2_rate(true))},
                 {"l1_rate_all", num(res.l1_rate(false))},
                 {"l1_rate_event", num(res.l1_rate(true))},
                 {"unconverged", res.unconverged()},
                 {"noise_event_probability_formula", noise_tail_prob(cfg.p, cfg.theory.a)}};
    return r;
}

Report to_report(const ExperimentConfig& cfg, const GaussDesignCheck& res) {
    Report r = base_report(cfg, {"trial_index", "seed", "norm_min", "norm_max", "lower_limit", "upper_limit",
                                 "holds", "predicted_lower", "predicted_upper", "lower_margin", "upper_margin"});
    const double root_n = sqrt_n(res.n);
    double lower_sum = 0.0;
    double upper_sum = 0.0;
    for (const auto& t : res.trials) {
        lower_sum += res.lower_margin(t);
        upper_sum += res.upper_margin(t);
        push_row(r, cfg,
                 {as_int(t.trial_index), std::to_string(t.seed), t.norm_min, t.norm_max,
                  (1.0 - res.theta - res.slack) * root_n, (1.0 + res.theta) * root_n, res.holds(t),
                  res.predicted_lower(), res.predicted_upper(), res.lower_margin(t), res.upper_margin(t)},
                 t.runtime_ms);
    }
    const double count = static_cast<double>(res.trials.size());
    r.summary = {{"trials", res.trials.size()},
                 {"hold_frequency", num(res.hold_frequency())},
                 {"target_probability", res.target_probability},
                 {"c_bar", res.c_bar},
                 {"threshold", res.threshold},
                 {"mean_lower_margin", lower_sum / count},
                 {"mean_upper_margin", upper_sum / count}};
    return r;
}

Report to_report(const ExperimentConfig& cfg, const WidthStudy& res) {
    Report r = base_report(cfg, {"seed_index", "quantity", "m", "estimate", "std_error", "gaussian_trials", "bound",
                                 "within_bound", "lower_estimate"});
    r.table.columns.erase(std::remove(r.table.columns.begin(), r.table.columns.end(), "runtime_ms"),
                          r.table.columns.end());
    for (const auto& w : res.rows)
        r.table.add_row({as_int(w.seed_index), w.quantity, as_int(w.m), w.estimate.mean, w.estimate.std_error,
                         as_int(w.estimate.trials), w.bound, w.within(), w.estimate.lower_estimate});
    r.summary = {{"seeds", cfg.trials},
                 {"k_sigma", res.k_sigma},
                 {"rho_max_s", res.rho_max_s},
                 {"c_bar", res.c_bar},
                 {"violations", res.violations()}};
    return r;
}

Report to_report(const ExperimentConfig& cfg, const CertificationRun& res) {
    Report r = base_report(cfg, {"target", "s", "k0", "k_est", "k_mode", "rho_min_2s", "rho_max_s", "rho_exact",
                                 "rip_theta", "samples_used", "restarts"});
    r.table.columns.erase(std::remove(r.table.columns.begin(), r.table.columns.end(), "runtime_ms"),
                          r.table.columns.end());
    for (const RECertificate* c : {&res.covariance, &res.design})
        r.table.add_row({c->target == CertificateTarget::covariance ? "covariance" : "design", as_int(c->s), c->k0,
                         c->k_est, c->k_mode, c->rho_min_2s, c->rho_max_s, c->rho_exact,
                         c->rip_theta ? *c->rip_theta : kNaN, as_int(c->samples_used, 0), as_int(c->restarts)});
    r.summary = json::object();
    if (res.equivalence) {
        const auto& e = *res.equivalence;
        r.summary["equivalence"] = {{"s", e.s},
                                    {"m", e.m},
                                    {"k0", e.k0},
                                    {"slack", e.slack},
                                    {"k_base", e.k_base},
                                    {"k_ss", e.k_ss},
                                    {"k_sm", e.k_sm},
                                    {"ss_lower_ok", e.ss_lower_ok},
                                    {"ss_upper_ok", e.ss_upper_ok},
                                    {"sm_lower_ok", e.sm_lower_ok},
                                    {"sm_upper_ok", e.sm_upper_ok}};
    }
    return r;
}

Report to_report(const ExperimentConfig& cfg, const std::vector<SweepCell>& cells) {
    Report r = base_report(cfg, {"n", "p", "s", "rho", "re_success_frequency", "lasso_l2_q50", "lasso_l2_q90",
                                 "cone_rate_event", "unconverged", "k_hat", "rho_max_s", "c_bar", "threshold",
                                 "error"});
    r.table.columns.erase(std::remove(r.table.columns.begin(), r.table.columns.end(), "runtime_ms"),
                          r.table.columns.end());
    std::size_t failed = 0;
    for (const auto& c : cells) {
        if (!c.error.empty()) ++failed;
        r.table.add_row({as_int(c.n), as_int(c.p), as_int(c.s), c.rho, c.re_success_frequency, c.lasso_l2_q50,
                         c.lasso_l2_q90, c.cone_rate_event, as_int(c.unconverged), c.k_hat, c.rho_max_s, c.c_bar,
                         c.threshold, c.error});
    }
    r.summary = {{"cells", cells.size()}, {"failed_cells", failed}};
    return r;
}

Report run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    switch (cfg.experiment) {
        case ExperimentKind::recert: return to_report(cfg, run_recert(cfg));
        case ExperimentKind::re_verify: return to_report(cfg, run_re_verification(cfg));
        case ExperimentKind::recover_lasso:
        case ExperimentKind::recover_ds: return to_report(cfg, run_recovery(cfg));
        case ExperimentKind::width: return to_report(cfg, run_width(cfg));
        case ExperimentKind::sweep: return to_report(cfg, run_sweep(cfg));
        case ExperimentKind::gauss_design: return to_report(cfg, run_gauss_design_check(cfg));
    }
    throw ConfigError("unknown experiment");
}

}  // namespace rekit
