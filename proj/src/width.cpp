#include "rekit/width.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "rekit/cone.hpp"
#include "rekit/errors.hpp"
#include "rekit/recert.hpp"
#include "rekit/rng.hpp"

namespace rekit {

namespace {

constexpr std::size_t kAscentIterations = 200;
constexpr int kMaxHalvings = 50;

Vector gaussian_vector(std::size_t p, Rng& rng) {
    Vector h(p);
    for (double& v : h) v = rng.normal();
    return h;
}

// <g, delta> / ||Sigma^{1/2} delta||
double upsilon_objective(const CovarianceModel& model, std::span<const double> g, std::span<const double> delta) {
    const double q = quad_form(model.sigma, delta);
    if (!(q > 0.0)) return -std::numeric_limits<double>::infinity();
    return dot(g, delta) / std::sqrt(q);
}

// Projected gradient ascent of upsilon_objective over the cone anchored at the
// T0 of the starting vector.
double cone_ascent(const CovarianceModel& model, std::span<const double> g, Vector delta, std::size_t s, double k0) {
    const std::size_t p = model.p;
    const IndexSet anchor = top_indices(delta, s);
    const IndexSet rest = complement(p, anchor);

    auto project = [&](Vector& v) {
        const double head = norm1_on(v, anchor);
        if (!(head > 0.0)) return false;
        Vector tail(rest.size());
        for (std::size_t k = 0; k < rest.size(); ++k) tail[k] = v[rest[k]];
        project_l1_ball(tail, k0 * head);
        for (std::size_t k = 0; k < rest.size(); ++k) v[rest[k]] = tail[k];
        const double scale = 1.0 / norm2_on(v, anchor);
        for (double& x : v) x *= scale;
        return true;
    };

    if (!project(delta)) return -std::numeric_limits<double>::infinity();
    double f = upsilon_objective(model, g, delta);
    for (std::size_t it = 0; it < kAscentIterations; ++it) {
        const Vector sd = mat_vec(model.sigma, delta);
        const double q = dot(delta, sd);
        const double gd = dot(g, delta);
        Vector grad(p);
        for (std::size_t i = 0; i < p; ++i) grad[i] = g[i] / std::sqrt(q) - gd * sd[i] / (q * std::sqrt(q));

        double step = 1.0;
        bool accepted = false;
        Vector cand(p);
        double fc = f;
        for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
            for (std::size_t i = 0; i < p; ++i) cand[i] = delta[i] + step * grad[i];
            if (!project(cand)) continue;
            fc = upsilon_objective(model, g, cand);
            if (fc > f) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        const double gain = fc - f;
        delta.swap(cand);
        f = fc;
        if (gain < 1e-10 * std::abs(f)) break;
    }
    // Admissible at the anchor, hence T0-admissible, hence a member of E_s after scaling.
    return f;
}

}  // namespace

std::string to_string(WidthSet set) {
    switch (set) {
        case WidthSet::es_image: return "es_image";
        case WidthSet::column_set: return "column_set";
        case WidthSet::sparse_sphere: return "sparse_sphere";
        case WidthSet::custom: return "custom";
    }
    return "custom";
}

WidthEstimate summarize_width(std::span<const double> suprema, WidthSet kind, bool lower_estimate) {
    WidthEstimate out;
    out.trials = suprema.size();
    out.set_kind = kind;
    out.lower_estimate = lower_estimate;
    if (suprema.empty()) return out;
    const double n = static_cast<double>(suprema.size());
    out.mean = std::accumulate(suprema.begin(), suprema.end(), 0.0) / n;
    if (suprema.size() > 1) {
        double ss = 0.0;
        for (double v : suprema) ss += (v - out.mean) * (v - out.mean);
        out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return out;
}

UpsilonPool make_upsilon_pool(const CovarianceModel& model, std::size_t s, double k0, std::size_t samples,
                              std::uint64_t seed) {
    Rng rng(seed);
    UpsilonPool pool;
    pool.deltas.reserve(samples);
    pool.images.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        Vector delta = sample_Es(model, s, k0, rng);
        Vector image = mat_vec(model.sigma_half, delta);
        pool.deltas.push_back(std::move(delta));
        pool.images.push_back(std::move(image));
    }
    return pool;
}

double upsilon_sup(const CovarianceModel& model, const UpsilonPool& pool, std::size_t s, double k0,
                   std::span<const double> h) {
    const Vector g = mat_vec(model.sigma_half, h);

    double best = 0.0;
    std::size_t best_idx = pool.images.size();
    for (std::size_t k = 0; k < pool.images.size(); ++k) {
        const double v = std::abs(dot(h, pool.images[k]));
        if (v > best) {
            best = v;
            best_idx = k;
        }
    }

    if (best_idx < pool.deltas.size()) {
        Vector start = pool.deltas[best_idx];
        if (dot(g, start) < 0.0) {
            for (double& x : start) x = -x;
        }
        best = std::max(best, cone_ascent(model, g, std::move(start), s, k0));
    }
    // Aligned start: g on its s largest entries.
    best = std::max(best, cone_ascent(model, g, restrict_to(g, top_indices(g, s)), s, k0));
    return best;
}

WidthEstimate ell_star_upsilon_mc(const CovarianceModel& model, std::size_t s, double k0, std::size_t inner_samples,
                                  std::size_t gaussian_trials, std::uint64_t seed) {
    if (s < 1 || 2 * s > model.p) throw InputDomainError("ell_star_upsilon_mc: need 1 <= s <= p/2");
    const UpsilonPool pool = make_upsilon_pool(model, s, k0, inner_samples, derive_seed(seed, 0));
    Rng rng(derive_seed(seed, 1));
    Vector sups(gaussian_trials);
    for (double& v : sups) v = upsilon_sup(model, pool, s, k0, gaussian_vector(model.p, rng));
    return summarize_width(sups, WidthSet::es_image, true);
}

WidthEstimate ell_star_phi_mc(const CovarianceModel& model, std::size_t gaussian_trials, std::uint64_t seed) {
    Rng rng(seed);
    Vector sups(gaussian_trials);
    for (double& v : sups) v = norm_inf(mat_vec(model.sigma_half, gaussian_vector(model.p, rng)));
    return summarize_width(sups, WidthSet::column_set, false);
}

double sparse_sphere_sup(std::span<const double> g, std::size_t m) { return norm2_on(g, top_indices(g, m)); }

WidthEstimate ell_star_sparse_sphere_mc(const CovarianceModel& model, std::size_t m, std::size_t gaussian_trials,
                                        std::uint64_t seed) {
    if (m < 1 || m > model.p) throw InputDomainError("ell_star_sparse_sphere_mc: need 1 <= m <= p");
    Rng rng(seed);
    Vector sups(gaussian_trials);
    for (double& v : sups) v = sparse_sphere_sup(mat_vec(model.sigma_half, gaussian_vector(model.p, rng)), m);
    return summarize_width(sups, WidthSet::sparse_sphere, false);
}

CoveringBound covering_bound(std::size_t m, std::size_t p, double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw InputDomainError("covering_bound: need 0 < eps <= 1/2");
    if (m > p) throw InputDomainError("covering_bound: need m <= p");
    CoveringBound out;
    const double md = static_cast<double>(m);
    const double log_binom = std::lgamma(static_cast<double>(p) + 1.0) - std::lgamma(md + 1.0) -
                             std::lgamma(static_cast<double>(p - m) + 1.0);
    out.log_value = md * std::log(5.0 / (2.0 * eps)) + log_binom;
    if (out.log_value > std::log(std::numeric_limits<double>::max())) {
        out.overflow = true;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    const std::uint64_t b = binomial(p, m);
    if (b != std::numeric_limits<std::uint64_t>::max())
        out.value = std::pow(5.0 / (2.0 * eps), md) * static_cast<double>(b);
    else
        out.value = std::exp(out.log_value);
    return out;
}

double gaussian_max_bound(std::size_t n_vars, double max_std) {
    if (n_vars < 2) throw InputDomainError("gaussian_max_bound: need at least two variables");
    return 3.0 * std::sqrt(std::log(static_cast<double>(n_vars))) * max_std;
}

double phi_width_bound(std::size_t p) { return 3.0 * std::sqrt(std::log(static_cast<double>(p))); }

double sparse_sphere_width_bound(std::size_t m, std::size_t p, double rho_max_m) {
    const double md = static_cast<double>(m);
    return 2.0 * 3.0 * std::sqrt(md * std::log(5.0 * std::numbers::e * static_cast<double>(p) / md)) *
           std::sqrt(rho_max_m);
}

double upsilon_width_bound(double c_bar, std::size_t s, std::size_t p) {
    const double sd = static_cast<double>(s);
    return c_bar * std::sqrt(sd * std::log(5.0 * std::numbers::e * static_cast<double>(p) / sd));
}

}  // namespace rekit
