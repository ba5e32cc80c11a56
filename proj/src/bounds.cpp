#include "rekit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rekit/cone.hpp"
#include "rekit/errors.hpp"

namespace rekit {

void TheoryConfig::validate() const {
    if (!(sigma_noise > 0.0)) throw ConfigError("theory.sigma_noise must be positive");
    if (!(a >= 0.0)) throw ConfigError("theory.a must be non-negative");
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theory.theta must lie in (0, 1)");
    if (!(alpha_psi2 > 0.0)) throw ConfigError("theory.alpha_psi2 must be positive");
    if (!(c_prime > 0.0) || !(c_bar_abs > 0.0)) throw ConfigError("theory constants must be positive");
    if (!(d > 0.0)) throw ConfigError("theory.d must be positive");
}

double lambda_noise(double sigma, double a, std::size_t p, std::size_t n) {
    if (p < 2) throw InputDomainError("lambda_noise: need p >= 2");
    if (n < 1) throw InputDomainError("lambda_noise: need n >= 1");
    if (a < 0.0) throw InputDomainError("lambda_noise: need a >= 0");
    return sigma * std::sqrt(1.0 + a) * std::sqrt(2.0 * std::log(static_cast<double>(p)) / static_cast<double>(n));
}

double c_bar(double k0, double k_sigma, double rho_max_s) { return 3.0 * (2.0 + k0) * k_sigma * std::sqrt(rho_max_s); }

namespace {
double log_5ep_over(std::size_t p, std::size_t s) {
    return std::log(5.0 * std::numbers::e * static_cast<double>(p) / static_cast<double>(s));
}
}  // namespace

double sample_size_threshold(std::size_t s, std::size_t p, double theta, double alpha, double c_bar_val,
                             double c_prime) {
    const double sd = static_cast<double>(s);
    const double width_term = c_bar_val * c_bar_val * sd * log_5ep_over(p, s);
    const double column_term = 9.0 * std::log(static_cast<double>(p));
    return c_prime * std::pow(alpha, 4) / (theta * theta) * std::max(width_term, column_term);
}

double sample_size_threshold_gaussian(std::size_t s, std::size_t p, double theta, double c_bar_val, double d) {
    const double root = c_bar_val * std::sqrt(static_cast<double>(s) * log_5ep_over(p, s)) +
                        std::sqrt(2.0 * d * std::log(static_cast<double>(p)));
    return root * root / (theta * theta);
}

double design_event_probability(std::size_t n, double theta, double alpha, double c_bar_abs) {
    return 1.0 - 2.0 * std::exp(-c_bar_abs * theta * theta * static_cast<double>(n) / std::pow(alpha, 4));
}

ErrorBounds error_bounds_lasso(std::size_t s, double lambda_n, double k_sigma_3, double theta) {
    if (!(theta >= 0.0 && theta < 1.0)) throw InputDomainError("error_bounds_lasso: theta must lie in [0, 1)");
    ErrorBounds out;
    out.B = 4.0 * k_sigma_3 * k_sigma_3 / ((1.0 - theta) * (1.0 - theta));
    out.l2_bound = 2.0 * out.B * lambda_n * std::sqrt(static_cast<double>(s));
    out.l1_bound = out.B * lambda_n * static_cast<double>(s);
    return out;
}

ErrorBounds error_bounds_ds(std::size_t s, double lambda_n, double k_sigma_1, double theta) {
    if (!(theta >= 0.0 && theta < 1.0)) throw InputDomainError("error_bounds_ds: theta must lie in [0, 1)");
    ErrorBounds out;
    out.B = 4.0 * k_sigma_1 * k_sigma_1 / ((1.0 - theta) * (1.0 - theta));
    out.l2_bound = 3.0 * out.B * lambda_n * std::sqrt(static_cast<double>(s));
    out.l1_bound = 2.0 * out.B * lambda_n * static_cast<double>(s);
    return out;
}

EventFlags check_events(const Matrix& x, std::span<const double> epsilon, double theta, double a, double sigma) {
    if (epsilon.size() != x.rows()) throw InputDomainError("check_events: dimension mismatch");
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    const double root_n = std::sqrt(static_cast<double>(n));

    EventFlags flags;
    Vector col_sq(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = x.row(i);
        for (std::size_t j = 0; j < p; ++j) col_sq[j] += r[j] * r[j];
    }
    flags.min_column_ratio = std::sqrt(*std::min_element(col_sq.begin(), col_sq.end())) / root_n;
    flags.max_column_ratio = std::sqrt(*std::max_element(col_sq.begin(), col_sq.end())) / root_n;
    flags.f_theta = flags.min_column_ratio >= 1.0 - theta && flags.max_column_ratio <= 1.0 + theta;

    Vector corr = mat_t_vec(x, epsilon);
    flags.max_noise_correlation = norm_inf(corr) / static_cast<double>(n);
    flags.t_a = flags.max_noise_correlation <= (1.0 + theta) * lambda_noise(sigma, a, p, n);
    return flags;
}

bool cone_holds(std::span<const double> beta_hat, std::span<const double> beta, double k0) {
    double on = 0.0;
    double off = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        const double v = std::abs(beta_hat[j] - beta[j]);
        (beta[j] != 0.0 ? on : off) += v;
    }
    return off <= k0 * on * (1.0 + kConeSlack) + 1e-12;
}

double noise_tail_prob(std::size_t p, double a) {
    if (p < 2) throw InputDomainError("noise_tail_prob: need p >= 2");
    const double pd = static_cast<double>(p);
    return 1.0 - 1.0 / (std::sqrt(std::numbers::pi * std::log(pd)) * std::pow(pd, a));
}

}  // namespace rekit
