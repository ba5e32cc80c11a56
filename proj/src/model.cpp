#include "rekit/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rekit/errors.hpp"
#include "rekit/rng.hpp"

namespace rekit {

std::string to_string(CovarianceKind kind) {
    switch (kind) {
        case CovarianceKind::identity: return "identity";
        case CovarianceKind::ar1: return "ar1";
        case CovarianceKind::equicorrelation: return "equicorrelation";
        case CovarianceKind::explicit_matrix: return "explicit";
    }
    return "unknown";
}

CovarianceKind covariance_kind_from_string(const std::string& name) {
    if (name == "identity") return CovarianceKind::identity;
    if (name == "ar1") return CovarianceKind::ar1;
    if (name == "equicorrelation" || name == "equicorr") return CovarianceKind::equicorrelation;
    if (name == "explicit") return CovarianceKind::explicit_matrix;
    throw ModelError("unknown covariance kind '" + name + "'");
}

CovarianceModel make_covariance(std::size_t p, const CovarianceSpec& spec) {
    if (p == 0) throw ModelError("make_covariance: p must be positive");
    Matrix sigma(p, p);
    switch (spec.kind) {
        case CovarianceKind::identity:
            sigma = Matrix::identity(p);
            break;
        case CovarianceKind::ar1:
            if (!(std::abs(spec.rho) < 1.0)) throw ModelError("ar1: |rho| must be < 1");
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j < p; ++j)
                    sigma(i, j) = std::pow(spec.rho, static_cast<double>(i > j ? i - j : j - i));
            break;
        case CovarianceKind::equicorrelation: {
            const double lower = p > 1 ? -1.0 / static_cast<double>(p - 1) : -INFINITY;
            if (!(spec.rho < 1.0 && spec.rho > lower))
                throw ModelError("equicorrelation: rho must lie in (-1/(p-1), 1)");
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j < p; ++j) sigma(i, j) = i == j ? 1.0 : spec.rho;
            break;
        }
        case CovarianceKind::explicit_matrix: {
            if (!spec.matrix) throw ModelError("explicit covariance requires a matrix");
            if (spec.matrix->dim() != p) throw ModelError("explicit covariance: dimension mismatch");
            for (std::size_t j = 0; j < p; ++j)
                if (std::abs((*spec.matrix)(j, j) - 1.0) > 1e-12)
                    throw ModelError("explicit covariance: diagonal entries must equal 1");
            sigma = spec.matrix->matrix();
            for (std::size_t j = 0; j < p; ++j) sigma(j, j) = 1.0;
            break;
        }
    }

    CovarianceModel model{p, spec, SymMatrix(std::move(sigma)), {}};
    try {
        model.sigma_half = psd_sqrt(model.sigma);
    } catch (const NotPsdError& e) {
        throw ModelError(std::string("covariance is not positive semidefinite: ") + e.what());
    }
    return model;
}

std::string to_string(EnsembleTag tag) { return tag == EnsembleTag::gaussian ? "gaussian" : "rademacher"; }

EnsembleTag ensemble_from_string(const std::string& name) {
    if (name == "gaussian") return EnsembleTag::gaussian;
    if (name == "rademacher") return EnsembleTag::rademacher;
    throw ModelError("unknown ensemble '" + name + "'");
}

EnsembleKind EnsembleKind::gaussian() { return {EnsembleTag::gaussian, std::sqrt(8.0 / 3.0)}; }
EnsembleKind EnsembleKind::rademacher() { return {EnsembleTag::rademacher, 1.0 / std::sqrt(std::log(2.0))}; }
EnsembleKind EnsembleKind::from_tag(EnsembleTag tag) {
    return tag == EnsembleTag::gaussian ? gaussian() : rademacher();
}

DesignSample sample_design(std::size_t n, const CovarianceModel& model, const EnsembleKind& ensemble,
                           std::uint64_t seed) {
    if (n == 0) throw InputDomainError("sample_design: n must be positive");
    const std::size_t p = model.p;
    Rng rng(seed);
    Matrix psi(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
            psi(i, j) = ensemble.tag == EnsembleTag::gaussian ? rng.normal() : rng.rademacher();

    DesignSample out{{}, ensemble, seed, n, p};
    if (model.spec.kind == CovarianceKind::identity)
        out.x = std::move(psi);
    else
        out.x = mat_mul(psi, model.sigma_half.matrix());
    return out;
}

IndexSet sample_support(std::size_t p, std::size_t s, Rng& rng) {
    // partial Fisher-Yates
    IndexSet perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = 0; i < s; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(p - i));
        std::swap(perm[i], perm[j]);
    }
    IndexSet support(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(s));
    std::sort(support.begin(), support.end());
    return support;
}

Vector sample_sparse_signal(std::size_t p, std::size_t s, const SignalSpec& spec, std::uint64_t seed) {
    if (s < 1 || s > p) throw InputDomainError("sample_sparse_signal: need 1 <= s <= p");
    Rng rng(seed);
    Vector beta(p, 0.0);
    for (std::size_t j : sample_support(p, s, rng)) {
        const double sign = rng.rademacher();
        double magnitude = spec.amplitude;
        if (spec.scheme == AmplitudeScheme::uniform) magnitude = spec.amplitude * (0.5 + 0.5 * rng.uniform());
        beta[j] = sign * magnitude;
    }
    return beta;
}

Vector sample_noise(std::size_t n, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw InputDomainError("sample_noise: sigma must be non-negative");
    Vector eps(n, 0.0);
    if (sigma == 0.0) return eps;
    Rng rng(seed);
    for (double& e : eps) e = sigma * rng.normal();
    return eps;
}

RecoveryInstance make_recovery_instance(Matrix design, Vector signal, Vector noise, double noise_sigma) {
    if (design.cols() != signal.size() || design.rows() != noise.size())
        throw InputDomainError("make_recovery_instance: dimension mismatch");
    RecoveryInstance inst;
    inst.observed = mat_vec(design, signal);
    for (std::size_t i = 0; i < inst.observed.size(); ++i) inst.observed[i] += noise[i];
    for (std::size_t j = 0; j < signal.size(); ++j)
        if (signal[j] != 0.0) inst.support.push_back(j);
    inst.design = std::move(design);
    inst.signal = std::move(signal);
    inst.noise = std::move(noise);
    inst.noise_sigma = noise_sigma;
    return inst;
}

}  // namespace rekit
