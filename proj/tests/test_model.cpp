#include <doctest.h>

#include <cmath>

#include "rekit/errors.hpp"
#include "rekit/model.hpp"
#include "test_util.hpp"

using namespace rekit;

TEST_CASE("make_covariance examples") {
    const CovarianceModel id = make_covariance(3, CovarianceSpec::identity());
    CHECK(id.sigma == SymMatrix::identity(3));
    CHECK(id.sigma_half == SymMatrix::identity(3));

    CHECK(make_covariance(3, CovarianceSpec::ar1(0.0)).sigma == SymMatrix::identity(3));

    const CovarianceModel eq = make_covariance(3, CovarianceSpec::equicorrelation(0.5));
    const EigenPair e = sym_eigen(eq.sigma);
    CHECK(e.values[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.values[2] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("covariance invariants") {
    for (const auto& spec : {CovarianceSpec::ar1(0.7), CovarianceSpec::ar1(-0.4), CovarianceSpec::equicorrelation(0.3),
                             CovarianceSpec::equicorrelation(-0.1),
                             CovarianceSpec::from_matrix(testutil::random_correlation(6, 4))}) {
        const CovarianceModel m = make_covariance(6, spec);
        for (std::size_t j = 0; j < 6; ++j) CHECK(m.sigma(j, j) == 1.0);
        CHECK(testutil::max_abs_diff(mat_mul(m.sigma_half.matrix(), m.sigma_half.matrix()), m.sigma.matrix()) <= 1e-8);
        CHECK(sym_eigen(m.sigma).values[0] >= -1e-12);
    }
}

TEST_CASE("ar1 entries are exact powers") {
    const CovarianceModel m = make_covariance(7, CovarianceSpec::ar1(0.5));
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j)
            CHECK(m.sigma(i, j) == std::pow(0.5, std::abs(static_cast<int>(i) - static_cast<int>(j))));
}

TEST_CASE("make_covariance rejects bad parameters") {
    CHECK_THROWS_AS(make_covariance(3, CovarianceSpec::ar1(1.0)), ModelError);
    CHECK_THROWS_AS(make_covariance(3, CovarianceSpec::ar1(-1.2)), ModelError);
    CHECK_THROWS_AS(make_covariance(3, CovarianceSpec::equicorrelation(-0.5)), ModelError);
    CHECK_THROWS_AS(make_covariance(3, CovarianceSpec::equicorrelation(1.0)), ModelError);
    CHECK_THROWS_AS(make_covariance(2, CovarianceSpec::from_matrix(testutil::sym({{1, 2}, {2, 1}}))), ModelError);
    CHECK_THROWS_AS(make_covariance(2, CovarianceSpec::from_matrix(testutil::sym({{2, 0}, {0, 1}}))), ModelError);
    CHECK_THROWS_AS(make_covariance(3, CovarianceSpec::from_matrix(SymMatrix::identity(2))), ModelError);
}

TEST_CASE("sample_design examples") {
    const CovarianceModel id = make_covariance(5, CovarianceSpec::identity());
    const DesignSample r = sample_design(40, id, EnsembleKind::rademacher(), 1);
    for (double v : r.x.data()) CHECK((v == 1.0 || v == -1.0));
    CHECK(r.n == 40);
    CHECK(r.p == 5);

    const CovarianceModel id4 = make_covariance(4, CovarianceSpec::identity());
    const DesignSample g = sample_design(10000, id4, EnsembleKind::gaussian(), 2);
    for (std::size_t j = 0; j < 4; ++j) {
        const Vector c = g.x.col(j);
        double mean = 0.0;
        for (double v : c) mean += v;
        mean /= 10000.0;
        CHECK(std::abs(mean) <= 0.05);
        const double sq = norm2(c) * norm2(c) / 10000.0;
        CHECK(sq >= 0.9);
        CHECK(sq <= 1.1);
    }

    const DesignSample a = sample_design(20, id4, EnsembleKind::gaussian(), 77);
    const DesignSample b = sample_design(20, id4, EnsembleKind::gaussian(), 77);
    CHECK(a.x == b.x);
    CHECK_THROWS_AS(sample_design(0, id4, EnsembleKind::gaussian(), 1), InputDomainError);
}

TEST_CASE("ensembles are isotropic") {
    const CovarianceModel id = make_covariance(6, CovarianceSpec::identity());
    for (const auto& ens : {EnsembleKind::gaussian(), EnsembleKind::rademacher()}) {
        const DesignSample d = sample_design(50000, id, ens, 5);
        Rng rng(6);
        for (int k = 0; k < 10; ++k) {
            Vector y(6);
            for (double& v : y) v = rng.normal();
            const Vector xy = mat_vec(d.x, y);
            const double moment = dot(xy, xy) / 50000.0;
            const double target = dot(y, y);
            CHECK(std::abs(moment - target) <= 0.03 * target);
        }
    }
}

TEST_CASE("gaussian design has covariance sigma") {
    const CovarianceModel m = make_covariance(8, CovarianceSpec::ar1(0.5));
    const DesignSample d = sample_design(20000, m, EnsembleKind::gaussian(), 8);
    const SymMatrix emp = gram(d.x, 20000.0);
    CHECK(testutil::max_abs_diff(emp.matrix(), m.sigma.matrix()) <= 0.05);
}

TEST_CASE("ensemble psi2 constants") {
    CHECK(EnsembleKind::gaussian().psi2_alpha == doctest::Approx(std::sqrt(8.0 / 3.0)));
    CHECK(EnsembleKind::rademacher().psi2_alpha == doctest::Approx(1.0 / std::sqrt(std::log(2.0))));
}

TEST_CASE("sample_sparse_signal") {
    const Vector full = sample_sparse_signal(4, 4, {}, 1);
    for (double v : full) CHECK(std::abs(v) == 1.0);

    const Vector b = sample_sparse_signal(10, 3, {}, 2);
    CHECK(std::count_if(b.begin(), b.end(), [](double v) { return v != 0.0; }) == 3);
    CHECK(b == sample_sparse_signal(10, 3, {}, 2));

    const SignalSpec uni{AmplitudeScheme::uniform, 2.0};
    const Vector u = sample_sparse_signal(50, 20, uni, 3);
    for (double v : u)
        if (v != 0.0) {
            CHECK(std::abs(v) >= 1.0);
            CHECK(std::abs(v) <= 2.0);
        }
    CHECK_THROWS_AS(sample_sparse_signal(3, 4, {}, 1), InputDomainError);
}

TEST_CASE("sample_support is uniform over positions") {
    Rng rng(4);
    std::vector<int> hits(6, 0);
    for (int k = 0; k < 30000; ++k) {
        const IndexSet s = sample_support(6, 2, rng);
        REQUIRE(s.size() == 2);
        REQUIRE(s[0] < s[1]);
        for (auto i : s) ++hits[i];
    }
    for (int h : hits) CHECK(std::abs(h - 10000) < 400);
}

TEST_CASE("sample_noise") {
    for (double v : sample_noise(10, 0.0, 1)) CHECK(v == 0.0);
    const Vector e = sample_noise(100000, 1.0, 2);
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= 100000.0;
    double var = 0.0;
    for (double v : e) var += (v - mean) * (v - mean);
    var /= 99999.0;
    CHECK(var >= 0.98);
    CHECK(var <= 1.02);
    CHECK(e == sample_noise(100000, 1.0, 2));
}

TEST_CASE("make_recovery_instance builds Y = X beta + eps") {
    const Matrix x = testutil::gaussian_matrix(6, 4, 1);
    const Vector beta{0, 2, 0, -1};
    const Vector eps{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const RecoveryInstance inst = make_recovery_instance(x, beta, eps, 0.5);
    const Vector xb = mat_vec(x, beta);
    for (std::size_t i = 0; i < 6; ++i) CHECK(inst.observed[i] == xb[i] + eps[i]);
    CHECK(inst.support == IndexSet{1, 3});
}
