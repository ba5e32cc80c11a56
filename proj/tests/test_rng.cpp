#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "rekit/rng.hpp"

using namespace rekit;

namespace {

// Straight transcription of the published reference generators.
struct ReferenceXoshiro {
    std::uint64_t s[4];
    explicit ReferenceXoshiro(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s) {
            std::uint64_t z = (x += 0x9e3779b97f4a7c15);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9;
            z = (z ^ (z >> 27)) * 0x94d049bb133111eb;
            w = z ^ (z >> 31);
        }
    }
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t next() {
        const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
};

}  // namespace

TEST_CASE("splitmix64 published sequence") {
    std::uint64_t state = 1234567;
    CHECK(splitmix64(state) == 6457827717110365317ULL);
    CHECK(splitmix64(state) == 3203168211198807973ULL);
}

TEST_CASE("Rng matches the reference xoshiro256**") {
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xdeadbeefULL}) {
        Rng rng(seed);
        ReferenceXoshiro ref(seed);
        for (int k = 0; k < 1000; ++k) REQUIRE(rng.next_u64() == ref.next());
    }
}

TEST_CASE("derive_seed separates streams") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t master = 0; master < 20; ++master)
        for (std::uint64_t i = 0; i < 500; ++i) seen.insert(derive_seed(master, i));
    CHECK(seen.size() == 20 * 500);
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("uniform lies in [0, 1) with mean 1/2") {
    Rng rng(3);
    double sum = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("uniform_index is unbiased on a small range") {
    Rng rng(9);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int k = 0; k < n; ++k) ++counts[rng.uniform_index(7)];
    double chi2 = 0.0;
    for (int c : counts) chi2 += std::pow(c - n / 7.0, 2) / (n / 7.0);
    CHECK(chi2 < 22.5);  // 0.999 quantile of chi-square with 6 dof
    CHECK(rng.uniform_index(1) == 0);
}

TEST_CASE("normal moments") {
    Rng rng(11);
    const int n = 200000;
    double m1 = 0.0;
    double m2 = 0.0;
    double m4 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double z = rng.normal();
        m1 += z;
        m2 += z * z;
        m4 += z * z * z * z;
    }
    CHECK(std::abs(m1 / n) < 0.01);
    CHECK(std::abs(m2 / n - 1.0) < 0.015);
    CHECK(std::abs(m4 / n - 3.0) < 0.1);
}

TEST_CASE("rademacher is balanced") {
    Rng rng(13);
    int sum = 0;
    for (int k = 0; k < 100000; ++k) {
        const double r = rng.rademacher();
        REQUIRE((r == 1.0 || r == -1.0));
        sum += static_cast<int>(r);
    }
    CHECK(std::abs(sum) < 1500);
}
