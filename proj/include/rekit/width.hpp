#pragma once

#include <cstdint>
#include <string>

#include "rekit/model.hpp"

namespace rekit {

enum class WidthSet { es_image, column_set, sparse_sphere, custom };

std::string to_string(WidthSet set);

/// Monte Carlo estimate of a Gaussian width E sup_{t in V} |<h, t>|.
struct WidthEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
    WidthSet set_kind = WidthSet::custom;
    /// True when the inner supremum is only approximated from below.
    bool lower_estimate = false;
};

/// Reduces per-draw suprema to a WidthEstimate.
WidthEstimate summarize_width(std::span<const double> suprema, WidthSet kind, bool lower_estimate);

/// sup over E_s of |<h, Sigma^{1/2} delta>| for one Gaussian draw h. The inner
/// supremum is approximated by the best of a pool of E_s images plus projected
/// ascent, so the value is a lower bound on the true supremum.
struct UpsilonPool {
    std::vector<Vector> deltas;  // normalized E_s members
    std::vector<Vector> images;  // Sigma^{1/2} delta, unit norm
};
UpsilonPool make_upsilon_pool(const CovarianceModel& model, std::size_t s, double k0, std::size_t samples,
                              std::uint64_t seed);
double upsilon_sup(const CovarianceModel& model, const UpsilonPool& pool, std::size_t s, double k0,
                   std::span<const double> h);

/// Lower estimate of l*(Upsilon), Upsilon = Sigma^{1/2}(E_s).
WidthEstimate ell_star_upsilon_mc(const CovarianceModel& model, std::size_t s, double k0, std::size_t inner_samples,
                                  std::size_t gaussian_trials, std::uint64_t seed);

/// l*(Phi) for the columns of Sigma^{1/2}; inner supremum exact.
WidthEstimate ell_star_phi_mc(const CovarianceModel& model, std::size_t gaussian_trials, std::uint64_t seed);

/// sup over U_m of |<h, Sigma^{1/2} x>|: l2 norm of the m largest |(Sigma^{1/2} h)_i|.
double sparse_sphere_sup(std::span<const double> g, std::size_t m);

/// Lower-tail-free estimate of l~*(U_m) = l*(Sigma^{1/2} U_m); inner supremum exact.
WidthEstimate ell_star_sparse_sphere_mc(const CovarianceModel& model, std::size_t m, std::size_t gaussian_trials,
                                        std::uint64_t seed);

struct CoveringBound {
    double value = 0.0;      // (5/(2 eps))^m C(p, m); +inf when overflowed
    double log_value = 0.0;  // natural log of the bound
    bool overflow = false;
};

/// Cardinality bound of an eps-cover of the m-sparse unit ball.
CoveringBound covering_bound(std::size_t m, std::size_t p, double eps);

/// 3 sqrt(ln N) max_std, the Gaussian maximal inequality. N >= 2.
double gaussian_max_bound(std::size_t n_vars, double max_std);

/// 3 sqrt(ln p).
double phi_width_bound(std::size_t p);
/// 2 * 3 sqrt(m ln(5ep/m)) sqrt(rho_max(m)).
double sparse_sphere_width_bound(std::size_t m, std::size_t p, double rho_max_m);
/// c_bar sqrt(s ln(5ep/s)).
double upsilon_width_bound(double c_bar, std::size_t s, std::size_t p);

}  // namespace rekit
