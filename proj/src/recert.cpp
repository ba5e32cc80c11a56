#include "rekit/recert.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

#include "rekit/cone.hpp"
#include "rekit/errors.hpp"
#include "rekit/model.hpp"
#include "rekit/rng.hpp"

namespace rekit {

std::uint64_t binomial(std::size_t p, std::size_t m) {
    if (m > p) return 0;
    m = std::min(m, p - m);
    unsigned __int128 acc = 1;
    for (std::size_t i = 1; i <= m; ++i) {
        acc = acc * (p - m + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(acc);
}

namespace {

constexpr std::uint64_t kSeedSupportLimit = 20'000;
constexpr double kRelImprovementStop = 1e-10;
constexpr int kMaxHalvings = 60;
constexpr int kMaxReanchors = 8;

// Visits every m-subset of {0..p-1} in lexicographic order.
void for_each_combination(std::size_t p, std::size_t m, const std::function<void(const IndexSet&)>& visit) {
    IndexSet idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        visit(idx);
        std::size_t i = m;
        while (i > 0 && idx[i - 1] == p - m + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Visits supports exhaustively when C(p, m) <= cap, otherwise `fallback` uniform
// random supports. Returns whether the visit was exhaustive.
bool for_each_support(std::size_t p, std::size_t m, std::uint64_t cap, std::uint64_t fallback, std::uint64_t seed,
                      const std::function<void(const IndexSet&)>& visit) {
    if (binomial(p, m) <= cap) {
        for_each_combination(p, m, visit);
        return true;
    }
    Rng rng(seed);
    for (std::uint64_t k = 0; k < fallback; ++k) visit(sample_support(p, m, rng));
    return false;
}

// Minimizes v^T A v / ||v_D||^2 over the cone anchored at a fixed support J,
// where D = J plus the m largest entries outside J.
class AnchoredDescent {
public:
    AnchoredDescent(const SymMatrix& a, std::size_t s, std::size_t m, double k0, std::size_t max_iterations)
        : a_(a), s_(s), m_(m), k0_(k0), max_iterations_(max_iterations) {}

    struct Outcome {
        Vector v;
        std::size_t iterations = 0;
    };

    Outcome run(Vector v, const IndexSet& anchor) {
        const IndexSet rest = complement(a_.dim(), anchor);
        if (!project(v, anchor, rest)) return {std::move(v), 0};
        double f = objective(v, anchor, rest);
        std::size_t it = 0;
        for (; it < max_iterations_; ++it) {
            const IndexSet denom = denominator_set(v, anchor, rest);
            const double dn2 = sq_norm_on(v, denom);
            const Vector av = mat_vec(a_, v);
            Vector grad(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) grad[i] = 2.0 * av[i] / dn2;
            for (std::size_t i : denom) grad[i] -= 2.0 * f * v[i] / dn2;

            double step = 1.0;
            bool accepted = false;
            Vector cand(v.size());
            double fc = f;
            for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
                for (std::size_t i = 0; i < v.size(); ++i) cand[i] = v[i] - step * grad[i];
                if (!project(cand, anchor, rest)) continue;
                fc = objective(cand, anchor, rest);
                if (fc < f) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
            const double improvement = f - fc;
            v.swap(cand);
            f = fc;
            if (improvement < kRelImprovementStop * f) {
                ++it;
                break;
            }
        }
        return {std::move(v), it};
    }

private:
    static double sq_norm_on(const Vector& v, const IndexSet& set) {
        double sum = 0.0;
        for (std::size_t i : set) sum += v[i] * v[i];
        return sum;
    }

    IndexSet denominator_set(const Vector& v, const IndexSet& anchor, const IndexSet& rest) const {
        if (m_ == 0) return anchor;
        Vector outside(rest.size());
        for (std::size_t k = 0; k < rest.size(); ++k) outside[k] = v[rest[k]];
        IndexSet denom = anchor;
        for (std::size_t k : top_indices(outside, m_)) denom.push_back(rest[k]);
        return denom;
    }

    double objective(const Vector& v, const IndexSet& anchor, const IndexSet& rest) const {
        const double dn2 = sq_norm_on(v, denominator_set(v, anchor, rest));
        return std::max(quad_form(a_, v), 0.0) / dn2;
    }

    // Shrinks the tail onto the cone and rescales to ||v_J|| = 1.
    bool project(Vector& v, const IndexSet& anchor, const IndexSet& rest) const {
        const double head2 = sq_norm_on(v, anchor);
        if (!(head2 > 0.0) || !std::isfinite(head2)) return false;
        Vector tail(rest.size());
        for (std::size_t k = 0; k < rest.size(); ++k) tail[k] = v[rest[k]];
        project_l1_ball(tail, k0_ * norm1_on(v, anchor));
        for (std::size_t k = 0; k < rest.size(); ++k) v[rest[k]] = tail[k];
        const double scale = 1.0 / std::sqrt(head2);
        for (double& x : v) x *= scale;
        return true;
    }

    const SymMatrix& a_;
    std::size_t s_;
    std::size_t m_;
    double k0_;
    std::size_t max_iterations_;
};

// Minimum-eigenvector starts on the supports with the smallest lambda_min(A_SS).
std::vector<Vector> support_starts(const SymMatrix& a, std::size_t s, std::size_t count, std::uint64_t seed) {
    using Entry = std::pair<double, IndexSet>;
    auto worse = [](const Entry& x, const Entry& y) { return x.first < y.first; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> best(worse);
    for_each_support(a.dim(), s, kSeedSupportLimit, kSeedSupportLimit, seed, [&](const IndexSet& support) {
        const double lo = eigen_range(principal_submatrix(a, support)).min;
        if (best.size() < count) {
            best.emplace(lo, support);
        } else if (lo < best.top().first) {
            best.pop();
            best.emplace(lo, support);
        }
    });
    std::vector<Entry> chosen;
    while (!best.empty()) {
        chosen.push_back(best.top());
        best.pop();
    }
    std::reverse(chosen.begin(), chosen.end());

    std::vector<Vector> starts;
    for (const auto& [lo, support] : chosen) {
        const EigenPair e = sym_eigen(principal_submatrix(a, support));
        Vector v(a.dim(), 0.0);
        for (std::size_t k = 0; k < support.size(); ++k) v[support[k]] = e.vectors(k, 0);
        starts.push_back(std::move(v));
    }
    return starts;
}

void check_cone_args(const SymMatrix& a, std::size_t s, std::size_t m, double k0) {
    const std::size_t p = a.dim();
    if (s < 1 || s > p) throw InputDomainError("re_constant: need 1 <= s <= p");
    if (!(k0 > 0.0)) throw InputDomainError("re_constant: k0 must be positive");
    if (m > 0 && (m < s || s + m > p)) throw InputDomainError("re_constant_variant: need s <= m and s + m <= p");
}

ConeMinimizationResult minimize_cone_ratio(const SymMatrix& a, std::size_t s, std::size_t m, double k0,
                                           const SearchBudget& budget) {
    check_cone_args(a, s, m, k0);
    const std::size_t p = a.dim();
    const std::size_t restarts = std::max<std::size_t>(budget.restarts, 1);

    std::vector<Vector> starts = support_starts(a, s, (restarts + 3) / 4, derive_seed(budget.seed, 0xC0FFEE));
    for (std::size_t r = starts.size(); r < restarts; ++r) {
        Rng rng(derive_seed(budget.seed, r));
        starts.push_back(sample_cone_vector(p, s, k0, rng));
    }
    for (const Vector& v : budget.extra_starts) {
        if (v.size() == p && norm_inf(v) > 0.0) starts.push_back(v);
    }

    AnchoredDescent descent(a, s, m, k0, budget.max_iterations);
    ConeMinimizationResult out;
    out.s = s;
    out.m = m;
    out.k0 = k0;
    out.min_ratio = std::numeric_limits<double>::infinity();
    for (Vector start : starts) {
        // Start must be T0-admissible; cone draws and support vectors already are.
        IndexSet anchor = top_indices(start, s);
        Vector best = start;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int round = 0; round < kMaxReanchors; ++round) {
            auto outcome = descent.run(start, anchor);
            out.iterations += outcome.iterations;
            // T0 of the result dominates the anchor: same cone, larger denominator.
            if (!is_admissible(outcome.v, s, k0).admissible) break;
            const double ratio = cone_ratio(a, outcome.v, s, m);
            if (ratio < best_ratio) {
                best_ratio = ratio;
                best = outcome.v;
            }
            IndexSet next = top_indices(outcome.v, s);
            if (next == anchor) break;
            anchor = std::move(next);
            start = std::move(outcome.v);
        }
        if (!std::isfinite(best_ratio) && is_admissible(start, s, k0).admissible) {
            best = start;
            best_ratio = cone_ratio(a, start, s, m);
        }
        out.per_restart_ratios.push_back(best_ratio);
        if (best_ratio < out.min_ratio) {
            out.min_ratio = best_ratio;
            out.argmin_vector = std::move(best);
        }
    }
    if (!std::isfinite(out.min_ratio)) throw std::logic_error("re_constant: no admissible iterate found");
    return out;
}

}  // namespace

RestrictedEigenRange restricted_eigen_range(const SymMatrix& sigma, std::size_t m, const EnumerationOptions& opts) {
    const std::size_t p = sigma.dim();
    if (m < 1 || m > p) throw InputDomainError("restricted_eigen_range: need 1 <= m <= p");
    RestrictedEigenRange out;
    out.m = m;
    out.rho_min = std::numeric_limits<double>::infinity();
    out.rho_max = -std::numeric_limits<double>::infinity();
    out.exact = for_each_support(p, m, opts.cap, opts.fallback_samples, opts.seed, [&](const IndexSet& support) {
        const EigenRange r = eigen_range(principal_submatrix(sigma, support));
        out.rho_min = std::min(out.rho_min, r.min);
        out.rho_max = std::max(out.rho_max, r.max);
        ++out.supports_examined;
    });
    return out;
}

RipEstimate rip_constant(const Matrix& x, std::size_t s, const EnumerationOptions& opts) {
    // Interlacing: supports of size exactly s attain the extremes over |T| <= s.
    const RestrictedEigenRange r = restricted_eigen_range(gram(x, static_cast<double>(x.rows())), s, opts);
    return {std::max(r.rho_max - 1.0, 1.0 - r.rho_min), s, r.exact, r.supports_examined};
}

double cone_ratio(const SymMatrix& a, std::span<const double> v, std::size_t s, std::size_t m) {
    const double denom = norm2_on(v, top_indices(v, s + m));
    return std::sqrt(std::max(quad_form(a, v), 0.0)) / denom;
}

ConeMinimizationResult re_constant(const SymMatrix& a, std::size_t s, double k0, const SearchBudget& budget) {
    return minimize_cone_ratio(a, s, 0, k0, budget);
}

ConeMinimizationResult re_constant(const Matrix& x, std::size_t s, double k0, const SearchBudget& budget) {
    return minimize_cone_ratio(gram(x, static_cast<double>(x.rows())), s, 0, k0, budget);
}

ConeMinimizationResult re_constant_variant(const SymMatrix& a, std::size_t s, std::size_t m, double k0,
                                           const SearchBudget& budget) {
    if (m == 0) throw InputDomainError("re_constant_variant: m must be >= s");
    return minimize_cone_ratio(a, s, m, k0, budget);
}

ConeMinimizationResult re_constant_variant(const Matrix& x, std::size_t s, std::size_t m, double k0,
                                           const SearchBudget& budget) {
    return re_constant_variant(gram(x, static_cast<double>(x.rows())), s, m, k0, budget);
}

ConeMinimizationResult re_constant_random_search(const SymMatrix& a, std::size_t s, double k0, std::size_t samples,
                                                 std::uint64_t seed, std::size_t m) {
    check_cone_args(a, s, m, k0);
    Rng rng(seed);
    ConeMinimizationResult out;
    out.s = s;
    out.m = m;
    out.k0 = k0;
    out.min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples; ++k) {
        Vector v = sample_cone_vector(a.dim(), s, k0, rng);
        const double ratio = cone_ratio(a, v, s, m);
        if (ratio < out.min_ratio) {
            out.min_ratio = ratio;
            out.argmin_vector = std::move(v);
        }
    }
    out.per_restart_ratios.push_back(out.min_ratio);
    return out;
}

EquivalenceReport verify_re_equivalences(const SymMatrix& a, std::size_t s, std::size_t m, double k0,
                                         const SearchBudget& budget, double slack) {
    ConeMinimizationResult base = re_constant(a, s, k0, budget);

    SearchBudget chained = budget;
    chained.extra_starts.push_back(base.argmin_vector);
    ConeMinimizationResult ss = re_constant_variant(a, s, s, k0, chained);
    chained.extra_starts.push_back(ss.argmin_vector);
    ConeMinimizationResult sm = re_constant_variant(a, s, m, k0, chained);

    // Every minimizer is T0-admissible, so it is feasible for all three problems.
    const std::vector<const Vector*> pool{&base.argmin_vector, &ss.argmin_vector, &sm.argmin_vector};
    auto polish = [&](ConeMinimizationResult& r, std::size_t extra) {
        for (const Vector* v : pool) r.min_ratio = std::min(r.min_ratio, cone_ratio(a, *v, s, extra));
    };
    polish(base, 0);
    polish(ss, s);
    polish(sm, m);

    EquivalenceReport rep;
    rep.s = s;
    rep.m = m;
    rep.k0 = k0;
    rep.slack = slack;
    rep.k_base = base.k_est();
    rep.k_ss = ss.k_est();
    rep.k_sm = sm.k_est();
    const double grow = 1.0 + slack;
    rep.ss_lower_ok = rep.k_ss / std::sqrt(2.0) <= rep.k_base * grow;
    rep.ss_upper_ok = rep.k_base <= rep.k_ss * grow;
    rep.sm_lower_ok = rep.k_sm / std::sqrt(2.0 + k0 * k0) <= rep.k_base * grow;
    rep.sm_upper_ok = rep.k_base <= rep.k_sm * grow;
    return rep;
}

namespace {

RECertificate certify(const SymMatrix& a, CertificateTarget target, std::size_t s, double k0,
                      const SearchBudget& budget, const EnumerationOptions& opts) {
    RECertificate cert;
    cert.target = target;
    cert.s = s;
    cert.k0 = k0;
    const std::size_t p = a.dim();
    const RestrictedEigenRange lo = restricted_eigen_range(a, std::min(2 * s, p), opts);
    const RestrictedEigenRange hi = restricted_eigen_range(a, s, opts);
    cert.rho_min_2s = lo.rho_min;
    cert.rho_max_s = hi.rho_max;
    cert.rho_exact = lo.exact && hi.exact;
    cert.samples_used = lo.supports_examined + hi.supports_examined;
    if (target == CertificateTarget::design) cert.rip_theta = std::max(hi.rho_max - 1.0, 1.0 - hi.rho_min);
    const ConeMinimizationResult r = re_constant(a, s, k0, budget);
    cert.k_est = r.k_est();
    cert.restarts = r.per_restart_ratios.size();
    return cert;
}

}  // namespace

RECertificate certify_covariance(const SymMatrix& sigma, std::size_t s, double k0, const SearchBudget& budget,
                                 const EnumerationOptions& opts) {
    return certify(sigma, CertificateTarget::covariance, s, k0, budget, opts);
}

RECertificate certify_design(const Matrix& x, std::size_t s, double k0, const SearchBudget& budget,
                             const EnumerationOptions& opts) {
    return certify(gram(x, static_cast<double>(x.rows())), CertificateTarget::design, s, k0, budget, opts);
}

}  // namespace rekit
