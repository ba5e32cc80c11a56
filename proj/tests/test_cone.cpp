#include <doctest.h>

#include <cmath>

#include "rekit/cone.hpp"
#include "rekit/errors.hpp"
#include "test_util.hpp"

using namespace rekit;

TEST_CASE("block_decompose examples") {
    const Vector a{3, -2, 1, 0};
    auto d = block_decompose(a, 2);
    REQUIRE(d.blocks.size() == 2);
    CHECK(d.blocks[0] == IndexSet{0, 1});
    CHECK(d.blocks[1] == IndexSet{2, 3});

    const Vector ones{1, 1, 1, 1};
    d = block_decompose(ones, 2);
    CHECK(d.blocks[0] == IndexSet{0, 1});
    CHECK(d.blocks[1] == IndexSet{2, 3});

    const Vector e1{1, 0, 0, 0};
    d = block_decompose(e1, 2);
    CHECK(d.blocks[0] == IndexSet{0, 1});
    CHECK(d.blocks[1] == IndexSet{2, 3});
    CHECK(norm2_on(e1, d.blocks[1]) == 0.0);

    CHECK_THROWS_AS(block_decompose(e1, 0), InputDomainError);
    CHECK_THROWS_AS(block_decompose(e1, 5), InputDomainError);
}

TEST_CASE("block_decompose invariants on random vectors") {
    Rng rng(1);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t p = 3 + rng.uniform_index(15);
        const std::size_t s = 1 + rng.uniform_index(p);
        Vector v(p);
        for (double& x : v) x = rng.normal();
        const auto d = block_decompose(v, s);
        std::vector<int> seen(p, 0);
        for (std::size_t k = 0; k < d.blocks.size(); ++k) {
            const auto& b = d.blocks[k];
            if (k + 1 < d.blocks.size()) CHECK(b.size() == s);
            CHECK(b.size() <= s);
            CHECK(std::is_sorted(b.begin(), b.end()));
            for (auto i : b) ++seen[i];
            if (k + 1 < d.blocks.size()) {
                double lo = INFINITY;
                double hi = 0.0;
                for (auto i : b) lo = std::min(lo, std::abs(v[i]));
                for (auto i : d.blocks[k + 1]) hi = std::max(hi, std::abs(v[i]));
                CHECK(lo >= hi);
            }
        }
        for (int c : seen) CHECK(c == 1);
        CHECK(d.blocks[0] == top_indices(v, s));
    }
}

TEST_CASE("is_admissible examples") {
    const Vector e1{1, 0, 0, 0};
    for (std::size_t s : {1u, 2u, 4u})
        for (double k0 : {0.1, 1.0, 5.0}) CHECK(is_admissible(e1, s, k0).admissible);

    const Vector ones{1, 1, 1, 1};
    CHECK_FALSE(is_admissible(ones, 1, 1.0).admissible);
    CHECK(is_admissible(ones, 1, 1.0).j0.empty());

    const Vector b{2, 1, 1};
    const auto w = is_admissible(b, 1, 1.0);
    CHECK(w.admissible);
    CHECK(w.j0 == IndexSet{0});
    CHECK(w.k0 == 1.0);

    CHECK_THROWS_AS(is_admissible(Vector{0, 0, 0}, 1, 1.0), InputDomainError);
    CHECK_THROWS_AS(is_admissible(b, 1, 0.0), InputDomainError);
}

TEST_CASE("admissibility at any support implies the T0 cone") {
    Rng rng(2);
    for (double k0 : {1.0, 3.0}) {
        for (int rep = 0; rep < 10000; ++rep) {
            const std::size_t p = 12;
            const std::size_t s = 3;
            // cone vector at a random support, which is generally not T0
            const IndexSet j0 = sample_support(p, 1 + rng.uniform_index(s), rng);
            Vector v(p, 0.0);
            for (auto i : j0) v[i] = rng.normal();
            const IndexSet rest = complement(p, j0);
            Vector tail(p, 0.0);
            double tail_l1 = 0.0;
            for (auto i : rest) {
                tail[i] = rng.normal();
                tail_l1 += std::abs(tail[i]);
            }
            const double target = rng.uniform() * k0 * norm1_on(v, j0);
            for (auto i : rest) v[i] = tail[i] * target / tail_l1;
            REQUIRE(in_cone_at(v, j0, k0));
            REQUIRE(is_admissible(v, s, k0).admissible);
        }
    }
}

TEST_CASE("decomposition_tail_sums") {
    const Vector head{3, -1, 0, 0, 0};
    auto t = decomposition_tail_sums(block_decompose(head, 2), 1.0);
    CHECK(t.tail_l2_sum == 0.0);

    const Vector ones{1, 1, 1, 1};
    t = decomposition_tail_sums(block_decompose(ones, 2), 3.0);
    CHECK(t.tail_l2_sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(t.l1_over_sqrt_s == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(t.bound_k0_plus_1 == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(t.total_l2 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(t.bound_k0_plus_2 == doctest::Approx(5.0 * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("tail chains hold for admissible vectors") {
    Rng rng(3);
    for (int rep = 0; rep < 2000; ++rep) {
        const std::size_t p = 4 + rng.uniform_index(20);
        const std::size_t s = 1 + rng.uniform_index(p / 2);
        const double k0 = 0.5 + 4.0 * rng.uniform();
        const Vector v = sample_cone_vector(p, s, k0, rng);
        REQUIRE(is_admissible(v, s, k0).admissible);
        const auto t = decomposition_tail_sums(block_decompose(v, s), k0);
        const double tol = 1e-12 * (1.0 + t.total_l2);
        CHECK(t.tail_l2_sum <= t.l1_over_sqrt_s + tol);
        CHECK(t.tail_l2_sum <= t.bound_k0_plus_1 + tol);
        CHECK(t.total_l2 <= t.head_l2 + t.l1_over_sqrt_s + tol);
        CHECK(t.head_l2 + t.l1_over_sqrt_s <= t.bound_k0_plus_2 + tol);
    }
}

TEST_CASE("sample_Es postconditions") {
    const CovarianceModel id = make_covariance(8, CovarianceSpec::identity());
    const CovarianceModel ar = make_covariance(10, CovarianceSpec::ar1(0.6));
    Rng rng(4);
    for (int rep = 0; rep < 500; ++rep) {
        const Vector d = sample_Es(id, 4, 2.0, rng);
        CHECK(is_admissible(d, 4, 2.0).admissible);
        CHECK(std::abs(norm2(d) - 1.0) <= 1e-12);

        const Vector e = sample_Es(ar, 3, 1.0, rng);
        CHECK(is_admissible(e, 3, 1.0).admissible);
        CHECK(std::abs(norm2(mat_vec(ar.sigma_half, e)) - 1.0) <= 1e-12);
    }
    CHECK(sample_Es(ar, 2, 1.0, std::uint64_t{9}) == sample_Es(ar, 2, 1.0, std::uint64_t{9}));
    CHECK_THROWS_AS(sample_Es(ar, 6, 1.0, std::uint64_t{1}), InputDomainError);
}

TEST_CASE("project_l1_ball") {
    Vector inside{0.1, -0.2};
    project_l1_ball(inside, 1.0);
    CHECK(inside == Vector{0.1, -0.2});

    Vector w{3, -1, 0.5};
    project_l1_ball(w, 2.0);
    // soft threshold at 1: (2, 0, 0) has l1 norm 2
    CHECK(w[0] == doctest::Approx(2.0));
    CHECK(w[1] == doctest::Approx(0.0));
    CHECK(w[2] == doctest::Approx(0.0));

    Rng rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        Vector v(7);
        for (double& x : v) x = 3.0 * rng.normal();
        Vector proj = v;
        project_l1_ball(proj, 1.5);
        CHECK(norm1(proj) <= 1.5 + 1e-12);
        // no point of the ball is closer than the projection
        for (int k = 0; k < 50; ++k) {
            Vector q(7);
            for (double& x : q) x = rng.normal();
            const double scale = 1.5 * rng.uniform() / norm1(q);
            for (double& x : q) x *= scale;
            double dq = 0.0;
            double dp = 0.0;
            for (std::size_t i = 0; i < 7; ++i) {
                dq += (q[i] - v[i]) * (q[i] - v[i]);
                dp += (proj[i] - v[i]) * (proj[i] - v[i]);
            }
            CHECK(dp <= dq + 1e-12);
        }
    }
}
