#pragma once

#include <cstddef>
#include <span>

#include "rekit/linalg.hpp"

namespace rekit {

/// Constants of the theory. c_prime and c_bar_abs are unspecified absolute
/// constants and default to 1; threshold formulas built from them are shape
/// predictions, not pass/fail gates.
struct TheoryConfig {
    double sigma_noise = 1.0;
    double a = 1.0;
    double theta = 0.5;
    double alpha_psi2 = 1.0;
    double c_prime = 1.0;
    double c_bar_abs = 1.0;
    double d = 1.0;

    /// Throws ConfigError unless all fields are positive (a >= 0) and theta < 1.
    void validate() const;
};

/// sigma sqrt(1 + a) sqrt(2 ln p / n).
double lambda_noise(double sigma, double a, std::size_t p, std::size_t n);

/// 3 (2 + k0) K sqrt(rho_max(s)).
double c_bar(double k0, double k_sigma, double rho_max_s);

/// (c' alpha^4 / theta^2) max(C^2 s ln(5ep/s), 9 ln p).
double sample_size_threshold(std::size_t s, std::size_t p, double theta, double alpha, double c_bar_val,
                             double c_prime);

/// Gaussian-design threshold (1/theta^2) (C sqrt(s ln(5ep/s)) + sqrt(2 d ln p))^2.
double sample_size_threshold_gaussian(std::size_t s, std::size_t p, double theta, double c_bar_val, double d);

/// 1 - 2 exp(-c_bar_abs theta^2 n / alpha^4).
double design_event_probability(std::size_t n, double theta, double alpha, double c_bar_abs);

struct ErrorBounds {
    double l2_bound = 0.0;
    double l1_bound = 0.0;
    double B = 0.0;
};

/// B = 4K^2/(1-theta)^2 with K = K(s,3,Sigma); l2 = 2 B lambda sqrt(s), l1 = B lambda s.
ErrorBounds error_bounds_lasso(std::size_t s, double lambda_n, double k_sigma_3, double theta);
/// B = 4K^2/(1-theta)^2 with K = K(s,1,Sigma); l2 = 3 B lambda sqrt(s), l1 = 2 B lambda s.
ErrorBounds error_bounds_ds(std::size_t s, double lambda_n, double k_sigma_1, double theta);

struct EventFlags {
    bool f_theta = false;     // 1 - theta <= ||X_j|| / sqrt(n) <= 1 + theta for all j
    bool t_a = false;         // ||X^T eps / n||_inf <= (1 + theta) lambda_{sigma,a,p}
    bool cone_lasso = false;  // filled in after solving
    bool cone_ds = false;
    double max_noise_correlation = 0.0;  // ||X^T eps / n||_inf
    double min_column_ratio = 0.0;       // min_j ||X_j|| / sqrt(n)
    double max_column_ratio = 0.0;
};

EventFlags check_events(const Matrix& x, std::span<const double> epsilon, double theta, double a, double sigma);

/// ||v_{S^c}||_1 <= k0 ||v_S||_1 for v = beta_hat - beta, S = supp(beta).
bool cone_holds(std::span<const double> beta_hat, std::span<const double> beta, double k0);

/// 1 - 1/(sqrt(pi ln p) p^a).
double noise_tail_prob(std::size_t p, double a);

}  // namespace rekit
