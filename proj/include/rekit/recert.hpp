#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rekit/linalg.hpp"

namespace rekit {

/// Controls exhaustive support enumeration and its randomized fallback.
struct EnumerationOptions {
    std::uint64_t cap = 1'000'000;
    std::uint64_t fallback_samples = 20'000;
    std::uint64_t seed = 0;
};

/// rho_min(m), rho_max(m): extreme eigenvalues over all m x m principal
/// submatrices. exact == false when the support set was subsampled.
struct RestrictedEigenRange {
    double rho_min = 0.0;
    double rho_max = 0.0;
    std::size_t m = 0;
    bool exact = true;
    std::uint64_t supports_examined = 0;
};

RestrictedEigenRange restricted_eigen_range(const SymMatrix& sigma, std::size_t m,
                                            const EnumerationOptions& opts = {});

struct RipEstimate {
    double theta = 0.0;
    std::size_t s = 0;
    bool exact = true;
    std::uint64_t supports_examined = 0;
};

/// theta_s = max over |T| <= s of the deviation of spec(X_T^T X_T / n) from 1.
RipEstimate rip_constant(const Matrix& x, std::size_t s, const EnumerationOptions& opts = {});

/// Budget of the multi-start projected descent.
struct SearchBudget {
    std::size_t restarts = 64;
    std::size_t max_iterations = 500;
    std::uint64_t seed = 0;
    /// Additional starting vectors (e.g. minimizers of a related problem).
    std::vector<Vector> extra_starts;
};

/// Always the same value: the minimum found is realized by a feasible vector,
/// so it bounds the true minimum from above and 1/min_ratio bounds K from below.
inline constexpr const char* kRatioDirection = "empirical_upper_bound_on_min_ratio";

struct ConeMinimizationResult {
    double min_ratio = 0.0;
    Vector argmin_vector;
    Vector per_restart_ratios;
    std::size_t s = 0;
    std::size_t m = 0;  // 0: denominator over T0; otherwise over the top s+m entries
    double k0 = 0.0;
    std::size_t iterations = 0;

    double k_est() const { return 1.0 / min_ratio; }
    std::string direction() const { return kRatioDirection; }
};

/// sqrt(v^T A v) / ||v_D||_2 where D holds the s+m largest |v_i|. With A = Sigma
/// this is ||Sigma^{1/2} v|| / ||v_{T0}|| (m = 0) or / ||v_{J0m}|| with J0 = T0.
double cone_ratio(const SymMatrix& a, std::span<const double> v, std::size_t s, std::size_t m = 0);

/// 1/K(s, k0, A): minimizes cone_ratio over the T0-cone ||v_{T0^c}||_1 <= k0 ||v_{T0}||_1.
/// a is Sigma (covariance mode) or X^T X / n (design mode).
ConeMinimizationResult re_constant(const SymMatrix& a, std::size_t s, double k0, const SearchBudget& budget = {});
/// Design mode: forms X^T X / n.
ConeMinimizationResult re_constant(const Matrix& x, std::size_t s, double k0, const SearchBudget& budget = {});

/// 1/K(s, m, k0, A), denominator over J0 union the m largest entries outside J0.
/// m = s gives the RE(s, s, k0) variant. Requires s <= m and s + m <= p.
ConeMinimizationResult re_constant_variant(const SymMatrix& a, std::size_t s, std::size_t m, double k0,
                                           const SearchBudget& budget = {});
ConeMinimizationResult re_constant_variant(const Matrix& x, std::size_t s, std::size_t m, double k0,
                                           const SearchBudget& budget = {});

/// Pure random search over cone draws. Used to cross-check the descent.
ConeMinimizationResult re_constant_random_search(const SymMatrix& a, std::size_t s, double k0, std::size_t samples,
                                                 std::uint64_t seed, std::size_t m = 0);

struct EquivalenceReport {
    std::size_t s = 0;
    std::size_t m = 0;
    double k0 = 0.0;
    double slack = 0.0;
    double k_base = 0.0;  // K(s, k0)
    double k_ss = 0.0;    // K(s, s, k0)
    double k_sm = 0.0;    // K(s, m, k0)
    bool ss_lower_ok = false;  // K(s,s,k0)/sqrt(2) <= K(s,k0)
    bool ss_upper_ok = false;  // K(s,k0) <= K(s,s,k0)
    bool sm_lower_ok = false;  // K(s,m,k0)/sqrt(2+k0^2) <= K(s,k0)
    bool sm_upper_ok = false;  // K(s,k0) <= K(s,m,k0)

    bool all_ok() const { return ss_lower_ok && ss_upper_ok && sm_lower_ok && sm_upper_ok; }
};

/// Checks both equivalence bands on computed estimates, each inequality allowed
/// a relative slack. Minimizers are shared across the three problems before
/// comparing, since every one of them is feasible for all three.
EquivalenceReport verify_re_equivalences(const SymMatrix& a, std::size_t s, std::size_t m, double k0,
                                         const SearchBudget& budget = {}, double slack = 0.05);

enum class CertificateTarget { covariance, design };

struct RECertificate {
    CertificateTarget target = CertificateTarget::covariance;
    std::size_t s = 0;
    double k0 = 0.0;
    std::optional<std::size_t> m;
    double rho_min_2s = 0.0;
    double rho_max_s = 0.0;
    bool rho_exact = true;
    std::optional<double> rip_theta;
    double k_est = 0.0;
    std::string k_mode = kRatioDirection;
    std::uint64_t samples_used = 0;
    std::size_t restarts = 0;
};

RECertificate certify_covariance(const SymMatrix& sigma, std::size_t s, double k0, const SearchBudget& budget = {},
                                 const EnumerationOptions& opts = {});
RECertificate certify_design(const Matrix& x, std::size_t s, double k0, const SearchBudget& budget = {},
                             const EnumerationOptions& opts = {});

/// Number of m-subsets of p items, saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t p, std::size_t m);

}  // namespace rekit
