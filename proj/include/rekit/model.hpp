#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rekit/linalg.hpp"
#include "rekit/rng.hpp"

namespace rekit {

enum class CovarianceKind { identity, ar1, equicorrelation, explicit_matrix };

struct CovarianceSpec {
    CovarianceKind kind = CovarianceKind::identity;
    double rho = 0.0;                     // ar1 / equicorrelation
    std::optional<SymMatrix> matrix;      // explicit_matrix only

    static CovarianceSpec identity() { return {}; }
    static CovarianceSpec ar1(double rho) { return {CovarianceKind::ar1, rho, std::nullopt}; }
    static CovarianceSpec equicorrelation(double rho) { return {CovarianceKind::equicorrelation, rho, std::nullopt}; }
    static CovarianceSpec from_matrix(SymMatrix m) { return {CovarianceKind::explicit_matrix, 0.0, std::move(m)}; }
};

std::string to_string(CovarianceKind kind);
CovarianceKind covariance_kind_from_string(const std::string& name);

/// Unit-diagonal PSD correlation matrix together with its PSD square root.
struct CovarianceModel {
    std::size_t p = 0;
    CovarianceSpec spec;
    SymMatrix sigma;
    SymMatrix sigma_half;
};

/// Throws ModelError when rho is out of range or an explicit matrix is not a
/// unit-diagonal PSD matrix.
CovarianceModel make_covariance(std::size_t p, const CovarianceSpec& spec);

enum class EnsembleTag { gaussian, rademacher };

std::string to_string(EnsembleTag tag);
EnsembleTag ensemble_from_string(const std::string& name);

/// Row distribution of Psi. psi2_alpha is carried as metadata only.
struct EnsembleKind {
    EnsembleTag tag = EnsembleTag::gaussian;
    double psi2_alpha = 0.0;

    static EnsembleKind gaussian();
    static EnsembleKind rademacher();
    static EnsembleKind from_tag(EnsembleTag tag);
};

struct DesignSample {
    Matrix x;  // n x p, x = psi * sigma_half
    EnsembleKind ensemble;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::size_t p = 0;
};

DesignSample sample_design(std::size_t n, const CovarianceModel& model, const EnsembleKind& ensemble,
                           std::uint64_t seed);

enum class AmplitudeScheme { constant, uniform };

struct SignalSpec {
    AmplitudeScheme scheme = AmplitudeScheme::constant;
    double amplitude = 1.0;
};

/// s-sparse vector: support uniform among size-s subsets, random signs,
/// magnitude A (constant) or uniform in [A/2, A].
Vector sample_sparse_signal(std::size_t p, std::size_t s, const SignalSpec& spec, std::uint64_t seed);

/// i.i.d. N(0, sigma^2) entries.
Vector sample_noise(std::size_t n, double sigma, std::uint64_t seed);

/// Uniformly random s-subset of {0,...,p-1}, ascending.
IndexSet sample_support(std::size_t p, std::size_t s, Rng& rng);

struct RecoveryInstance {
    Matrix design;
    Vector signal;
    Vector noise;
    Vector observed;  // design * signal + noise
    double noise_sigma = 0.0;
    IndexSet support;
};

RecoveryInstance make_recovery_instance(Matrix design, Vector signal, Vector noise, double noise_sigma);

}  // namespace rekit
