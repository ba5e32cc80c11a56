#include <doctest.h>

#include <cmath>

#include "rekit/cone.hpp"
#include "rekit/errors.hpp"
#include "rekit/recert.hpp"
#include "test_util.hpp"

using namespace rekit;

namespace {

SymMatrix equicorr(std::size_t p, double rho) { return make_covariance(p, CovarianceSpec::equicorrelation(rho)).sigma; }

SearchBudget small_budget(std::uint64_t seed) {
    SearchBudget b;
    b.restarts = 32;
    b.seed = seed;
    return b;
}

// Exhaustive oracle with its own subset enumeration through bitmasks.
std::pair<double, double> brute_range(const SymMatrix& a, std::size_t m) {
    double lo = INFINITY;
    double hi = -INFINITY;
    const std::size_t p = a.dim();
    for (unsigned mask = 0; mask < (1u << p); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != m) continue;
        IndexSet s;
        for (std::size_t i = 0; i < p; ++i)
            if (mask & (1u << i)) s.push_back(i);
        const EigenPair e = sym_eigen(principal_submatrix(a, s));
        lo = std::min(lo, e.values.front());
        hi = std::max(hi, e.values.back());
    }
    return {lo, hi};
}

}  // namespace

TEST_CASE("restricted_eigen_range examples") {
    for (std::size_t m = 1; m <= 5; ++m) {
        const auto r = restricted_eigen_range(SymMatrix::identity(5), m);
        CHECK(r.rho_min == doctest::Approx(1.0));
        CHECK(r.rho_max == doctest::Approx(1.0));
        CHECK(r.exact);
    }
    const auto r = restricted_eigen_range(equicorr(4, 0.5), 2);
    CHECK(r.rho_min == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.rho_max == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(r.supports_examined == 6);

    const SymMatrix a = testutil::random_correlation(6, 3);
    const auto full = restricted_eigen_range(a, 6);
    const EigenPair e = sym_eigen(a);
    CHECK(full.rho_min == doctest::Approx(e.values.front()).epsilon(1e-10));
    CHECK(full.rho_max == doctest::Approx(e.values.back()).epsilon(1e-10));
}

TEST_CASE("restricted_eigen_range matches a bitmask oracle and nests") {
    const SymMatrix a = testutil::random_correlation(8, 17);
    double prev_min = INFINITY;
    double prev_max = 0.0;
    for (std::size_t m = 1; m <= 8; ++m) {
        const auto r = restricted_eigen_range(a, m);
        const auto [lo, hi] = brute_range(a, m);
        CHECK(r.rho_min == doctest::Approx(lo).epsilon(1e-10));
        CHECK(r.rho_max == doctest::Approx(hi).epsilon(1e-10));
        CHECK(r.rho_min <= prev_min + 1e-12);
        CHECK(r.rho_max >= prev_max - 1e-12);
        prev_min = r.rho_min;
        prev_max = r.rho_max;
    }
}

TEST_CASE("restricted_eigen_range falls back to sampling above the cap") {
    EnumerationOptions opts;
    opts.cap = 10;
    opts.fallback_samples = 50;
    const auto r = restricted_eigen_range(equicorr(8, 0.5), 3, opts);
    CHECK_FALSE(r.exact);
    CHECK(r.supports_examined == 50);
    // equicorrelation: every support has the same spectrum
    CHECK(r.rho_min == doctest::Approx(0.5));
    CHECK(r.rho_max == doctest::Approx(2.0));
}

TEST_CASE("rip_constant examples") {
    // orthonormal columns scaled by sqrt(n)
    Matrix q(4, 3);
    q(0, 0) = 2.0;
    q(1, 1) = 2.0;
    q(2, 2) = 2.0;
    CHECK(rip_constant(q, 2).theta == doctest::Approx(0.0));

    const Matrix x = testutil::gaussian_matrix(10, 4, 7);
    double col_dev = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        const Vector c = x.col(j);
        col_dev = std::max(col_dev, std::abs(dot(c, c) / 10.0 - 1.0));
    }
    CHECK(rip_constant(x, 1).theta == doctest::Approx(col_dev).epsilon(1e-12));

    // s = 2: all 2x2 Gram blocks in closed form, together with the s = 1 supports
    double oracle = col_dev;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
            const Vector ci = x.col(i);
            const Vector cj = x.col(j);
            const double a = dot(ci, ci) / 10.0;
            const double d = dot(cj, cj) / 10.0;
            const double b = dot(ci, cj) / 10.0;
            const double mid = 0.5 * (a + d);
            const double rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
            oracle = std::max({oracle, mid + rad - 1.0, 1.0 - (mid - rad)});
        }
    const RipEstimate rip = rip_constant(x, 2);
    CHECK(rip.theta == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(rip.exact);
}

TEST_CASE("RIP sandwich on enumerated supports") {
    const Matrix x = testutil::gaussian_matrix(30, 6, 8);
    const double theta = rip_constant(x, 3).theta;
    Rng rng(9);
    for (int rep = 0; rep < 500; ++rep) {
        const IndexSet t = sample_support(6, 1 + rng.uniform_index(3), rng);
        Vector c(6, 0.0);
        for (auto i : t) c[i] = rng.normal();
        const double cc = dot(c, c);
        const Vector xc = mat_vec(x, c);
        const double q = dot(xc, xc) / 30.0;
        CHECK(q >= (1.0 - theta) * cc - 1e-10);
        CHECK(q <= (1.0 + theta) * cc + 1e-10);
    }
}

TEST_CASE("re_constant on the identity is 1") {
    for (auto [s, k0] : {std::pair<std::size_t, double>{2, 1.0}, {2, 3.0}, {4, 1.0}}) {
        const auto r = re_constant(SymMatrix::identity(10), s, k0, small_budget(1));
        CHECK(r.min_ratio == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.k_est() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.direction() == "empirical_upper_bound_on_min_ratio");
    }
}

TEST_CASE("re_constant results are realized by admissible vectors") {
    const SymMatrix a = testutil::random_correlation(8, 21);
    for (double k0 : {0.5, 1.0, 3.0}) {
        const auto r = re_constant(a, 2, k0, small_budget(2));
        CHECK(is_admissible(r.argmin_vector, 2, k0).admissible);
        CHECK(std::abs(cone_ratio(a, r.argmin_vector, 2) - r.min_ratio) <= 1e-10);
        CHECK(r.min_ratio == *std::min_element(r.per_restart_ratios.begin(), r.per_restart_ratios.end()));
        CHECK(r.min_ratio > 0.0);
    }
}

TEST_CASE("re_constant is monotone in k0") {
    const SymMatrix a = testutil::random_correlation(8, 22);
    double prev = INFINITY;
    for (double k0 : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        SearchBudget b = small_budget(3);
        const auto r = re_constant(a, 2, k0, b);
        CHECK(r.min_ratio <= prev * (1.0 + 1e-6));
        prev = r.min_ratio;
    }
}

TEST_CASE("re_constant agrees with dense random search") {
    const SymMatrix a = equicorr(6, 0.3);
    const auto descent = re_constant(a, 2, 1.0, small_budget(4));
    const auto search = re_constant_random_search(a, 2, 1.0, 1'000'000, 5);
    CHECK(descent.min_ratio <= search.min_ratio * (1.0 + 1e-9));
    CHECK(std::abs(descent.min_ratio - search.min_ratio) <= 0.02 * search.min_ratio);
}

TEST_CASE("equicorrelation cone minimum in closed form") {
    // sqrt(1 - rho) is attained by vectors with zero sum on the support.
    for (double rho : {0.2, 0.5, 0.8}) {
        const auto r = re_constant(equicorr(8, rho), 2, 1.0, small_budget(6));
        CHECK(r.min_ratio == doctest::Approx(std::sqrt(1.0 - rho)).epsilon(1e-6));
    }
}

TEST_CASE("small k0 approaches the restricted eigenvalue from below") {
    const SymMatrix a = testutil::random_correlation(8, 23);
    const double target = std::sqrt(restricted_eigen_range(a, 2).rho_min);
    const auto r = re_constant(a, 2, 1e-3, small_budget(7));
    CHECK(r.min_ratio <= target * (1.0 + 1e-6));
    CHECK(r.min_ratio >= 0.95 * target);
}

TEST_CASE("design mode uses X^T X / n") {
    const Matrix x = testutil::gaussian_matrix(40, 6, 10);
    const auto a = re_constant(x, 2, 1.0, small_budget(8));
    const auto b = re_constant(gram(x, 40.0), 2, 1.0, small_budget(8));
    CHECK(a.min_ratio == doctest::Approx(b.min_ratio).epsilon(1e-12));
}

TEST_CASE("re_constant_variant structure") {
    const auto ident = re_constant_variant(SymMatrix::identity(8), 2, 2, 1.0, small_budget(9));
    CHECK(ident.min_ratio == doctest::Approx(1.0).epsilon(1e-9));

    // s + m = p: denominator is the full norm, so the ratio is at least sqrt(lambda_min)
    const SymMatrix a = testutil::random_correlation(6, 24);
    const auto full = re_constant_variant(a, 2, 4, 1.0, small_budget(10));
    CHECK(full.min_ratio >= std::sqrt(sym_eigen(a).values.front()) - 1e-9);
    CHECK(std::abs(cone_ratio(a, full.argmin_vector, 2, 4) - full.min_ratio) <= 1e-10);

    CHECK_THROWS_AS(re_constant_variant(a, 2, 1, 1.0), InputDomainError);
    CHECK_THROWS_AS(re_constant_variant(a, 3, 4, 1.0), InputDomainError);
}

TEST_CASE("RE constant ordering and equivalence bands") {
    const auto ident = verify_re_equivalences(SymMatrix::identity(8), 2, 2, 1.0, small_budget(11));
    CHECK(ident.all_ok());
    CHECK(ident.k_base == doctest::Approx(1.0).epsilon(1e-9));

    for (std::uint64_t seed = 30; seed < 33; ++seed) {
        const SymMatrix a = testutil::random_correlation(8, seed);
        for (double k0 : {1.0, 3.0}) {
            const auto rep = verify_re_equivalences(a, 2, 3, k0, small_budget(seed));
            CHECK(rep.all_ok());
            CHECK(rep.k_base <= rep.k_ss * 1.05);
            CHECK(rep.k_ss <= rep.k_sm * 1.05);
        }
    }
}

TEST_CASE("certificates") {
    const SymMatrix a = make_covariance(8, CovarianceSpec::ar1(0.5)).sigma;
    const RECertificate c = certify_covariance(a, 2, 1.0, small_budget(12));
    CHECK(c.target == CertificateTarget::covariance);
    CHECK(c.rho_min_2s == doctest::Approx(restricted_eigen_range(a, 4).rho_min));
    CHECK(c.rho_max_s == doctest::Approx(restricted_eigen_range(a, 2).rho_max));
    CHECK(c.k_est > 0.0);
    CHECK_FALSE(c.rip_theta.has_value());
    CHECK(c.k_mode == "empirical_upper_bound_on_min_ratio");

    const Matrix x = testutil::gaussian_matrix(50, 8, 13);
    const RECertificate d = certify_design(x, 2, 1.0, small_budget(13));
    CHECK(d.target == CertificateTarget::design);
    REQUIRE(d.rip_theta.has_value());
    CHECK(*d.rip_theta >= 0.0);
}

TEST_CASE("binomial") {
    CHECK(binomial(6, 2) == 15);
    CHECK(binomial(64, 4) == 635376);
    CHECK(binomial(5, 7) == 0);
    CHECK(binomial(1000, 500) == UINT64_MAX);
}
