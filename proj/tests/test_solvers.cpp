#include <doctest.h>

#include <array>
#include <cmath>

#include "rekit/errors.hpp"
#include "rekit/solvers.hpp"
#include "oracles.hpp"

using namespace rekit;

using namespace testutil;

TEST_CASE("soft_threshold") {
    CHECK(soft_threshold(3.0, 1.0) == 2.0);
    CHECK(soft_threshold(-3.0, 1.0) == -2.0);
    CHECK(soft_threshold(0.5, 1.0) == 0.0);
    CHECK(soft_threshold(1.0, 1.0) == 0.0);
    CHECK(soft_threshold(-1.0, 1.0) == 0.0);
}

TEST_CASE("large lambda gives the zero solution") {
    const Matrix x = testutil::gaussian_matrix(20, 5, 1);
    Rng rng(2);
    Vector y(20);
    for (double& v : y) v = rng.normal();
    const double lam = norm_inf(scaled_xty(x, y));
    const SolverResult l = lasso(x, y, lam);
    const SolverResult d = dantzig(x, y, lam * 1.0000001);
    CHECK(l.converged);
    CHECK(d.converged);
    for (double v : l.beta_hat) CHECK(v == 0.0);
    for (double v : d.beta_hat) CHECK(v == 0.0);
}

TEST_CASE("orthogonal design matches soft thresholding") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Matrix x = orthogonal_design(32, 8, seed);
        Rng rng(seed + 100);
        Vector y(32);
        for (double& v : y) v = 2.0 * rng.normal();
        const Vector z = scaled_xty(x, y);
        const double lam = 0.5 * norm_inf(z);
        const SolverResult l = lasso(x, y, lam);
        const SolverResult d = dantzig(x, y, lam);
        REQUIRE(l.converged);
        REQUIRE(d.converged);
        for (std::size_t j = 0; j < 8; ++j) {
            CHECK(std::abs(l.beta_hat[j] - soft_threshold(z[j], lam)) <= 1e-8);
            CHECK(std::abs(d.beta_hat[j] - soft_threshold(z[j], lam)) <= 1e-8);
        }
    }
}

TEST_CASE("lasso with lambda = 0 is least squares") {
    const Matrix x = testutil::gaussian_matrix(30, 5, 3);
    Rng rng(4);
    Vector y(30);
    for (double& v : y) v = rng.normal();
    const Vector ls = solve_dense(gram(x, 1.0).matrix(), mat_t_vec(x, y));
    const SolverResult l = lasso(x, y, 0.0, 1e-12);
    CHECK(l.converged);
    for (std::size_t j = 0; j < 5; ++j) CHECK(l.beta_hat[j] == doctest::Approx(ls[j]).epsilon(1e-8));
}

TEST_CASE("lasso KKT conditions and objective monotonicity") {
    const Matrix x = testutil::gaussian_matrix(40, 12, 5);
    Rng rng(6);
    Vector y(40);
    for (double& v : y) v = rng.normal();
    const double lam = 0.1;
    const SolverResult fit = lasso(x, y, lam);
    REQUIRE(fit.converged);
    CHECK(fit.kkt_residual <= 1e-10);
    const Vector fitted = mat_vec(x, fit.beta_hat);
    Vector r(40);
    for (std::size_t i = 0; i < 40; ++i) r[i] = y[i] - fitted[i];
    const Vector corr = scaled_xty(x, r);
    for (std::size_t j = 0; j < 12; ++j) {
        if (fit.beta_hat[j] == 0.0)
            CHECK(std::abs(corr[j]) <= lam + 1e-9);
        else
            CHECK(std::abs(corr[j] - lam * (fit.beta_hat[j] > 0 ? 1.0 : -1.0)) <= 1e-9);
    }

    double prev = INFINITY;
    for (std::size_t sweeps = 1; sweeps <= 20; ++sweeps) {
        const SolverResult partial = lasso(x, y, lam, 1e-10, sweeps);
        CHECK(partial.objective_or_l1 <= prev + 1e-14);
        prev = partial.objective_or_l1;
    }
}

TEST_CASE("lasso reports non-convergence") {
    const Matrix x = testutil::gaussian_matrix(40, 12, 7);
    Rng rng(8);
    Vector y(40);
    for (double& v : y) v = rng.normal();
    CHECK_FALSE(lasso(x, y, 0.01, 1e-14, 1).converged);
}

TEST_CASE("dantzig matches LP vertex enumeration") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const Matrix x = testutil::gaussian_matrix(4, 3, seed);
        Rng rng(seed + 1000);
        Vector y(4);
        for (double& v : y) v = rng.normal();
        const Vector c = scaled_xty(x, y);
        const double lam = (0.1 + 0.6 * rng.uniform()) * norm_inf(c);
        const SolverResult d = dantzig(x, y, lam);
        REQUIRE(d.converged);
        const Vector oracle = dantzig_vertex_oracle(gram(x, 4.0), c, lam);
        REQUIRE(oracle.size() == 3);
        CHECK(std::abs(norm1(d.beta_hat) - norm1(oracle)) <= 1e-8);
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(d.beta_hat[j] - oracle[j]) <= 1e-8);
    }
}

TEST_CASE("dantzig feasibility and l1 dominance") {
    Rng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix x = testutil::gaussian_matrix(40, 20, 200 + rep);
        Vector beta(20, 0.0);
        beta[rng.uniform_index(20)] = 1.0;
        beta[rng.uniform_index(20)] = -1.0;
        Vector y = mat_vec(x, beta);
        for (double& v : y) v += 0.3 * rng.normal();
        const SolverResult d = dantzig(x, y, 0.2);
        REQUIRE(d.converged);
        const SymMatrix g = gram(x, 40.0);
        const Vector c = scaled_xty(x, y);
        const Vector gb = mat_vec(g, d.beta_hat);
        for (std::size_t j = 0; j < 20; ++j) CHECK(std::abs(c[j] - gb[j]) <= 0.2 + 1e-9);
        // when the truth is feasible it cannot have smaller l1 norm
        const Vector gt = mat_vec(g, beta);
        bool truth_feasible = true;
        for (std::size_t j = 0; j < 20; ++j) truth_feasible = truth_feasible && std::abs(c[j] - gt[j]) <= 0.2;
        if (truth_feasible) CHECK(norm1(d.beta_hat) <= norm1(beta) + 1e-9);
    }
}

TEST_CASE("solve_lp small problems") {
    // max x + y s.t. x + 2y <= 4, 3x + y <= 6 -> (1.6, 1.2), value 2.8
    const Matrix a = testutil::matrix({{1, 2}, {3, 1}});
    const LpResult r = solve_lp(a, Vector{4, 6}, Vector{1, 1});
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.x[0] == doctest::Approx(1.6));
    CHECK(r.x[1] == doctest::Approx(1.2));
    CHECK(r.objective == doctest::Approx(2.8));
    CHECK(r.duality_gap <= 1e-12);
    CHECK(r.dual_infeasibility <= 1e-12);

    // infeasible: x <= -1
    CHECK(solve_lp(testutil::matrix({{1}}), Vector{-1}, Vector{1}).status == LpStatus::infeasible);
    // unbounded: max x with -x <= 1
    CHECK(solve_lp(testutil::matrix({{-1}}), Vector{1}, Vector{1}).status == LpStatus::unbounded);
    // phase one: x >= 1 written as -x <= -1, max -x -> x = 1
    const LpResult p1 = solve_lp(testutil::matrix({{-1}}), Vector{-1}, Vector{-1});
    REQUIRE(p1.status == LpStatus::optimal);
    CHECK(p1.x[0] == doctest::Approx(1.0));
}

TEST_CASE("solver input validation") {
    const Matrix x = testutil::gaussian_matrix(4, 3, 1);
    CHECK_THROWS_AS(lasso(x, Vector{1, 2, 3, 4}, -1.0), InputDomainError);
    CHECK_THROWS_AS(lasso(x, Vector{1, 2}, 1.0), InputDomainError);
    CHECK_THROWS_AS(dantzig(x, Vector{1, 2, 3, 4}, -1.0), InputDomainError);
}
