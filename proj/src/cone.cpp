#include "rekit/cone.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "rekit/errors.hpp"

namespace rekit {

namespace {

std::vector<std::size_t> magnitude_order(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(x[a]) > std::abs(x[b]); });
    return order;
}

}  // namespace

IndexSet top_indices(std::span<const double> x, std::size_t k) {
    k = std::min(k, x.size());
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    auto cmp = [&](std::size_t a, std::size_t b) {
        const double ma = std::abs(x[a]);
        const double mb = std::abs(x[b]);
        return ma > mb || (ma == mb && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), cmp);
    IndexSet out(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(out.begin(), out.end());
    return out;
}

Vector restrict_to(std::span<const double> x, std::span<const std::size_t> set) {
    Vector out(x.size(), 0.0);
    for (std::size_t i : set) out[i] = x[i];
    return out;
}

double norm1_on(std::span<const double> x, std::span<const std::size_t> set) {
    double sum = 0.0;
    for (std::size_t i : set) sum += std::abs(x[i]);
    return sum;
}

double norm2_on(std::span<const double> x, std::span<const std::size_t> set) {
    double sum = 0.0;
    for (std::size_t i : set) sum += x[i] * x[i];
    return std::sqrt(sum);
}

IndexSet complement(std::size_t p, std::span<const std::size_t> set) {
    std::vector<char> in(p, 0);
    for (std::size_t i : set) in[i] = 1;
    IndexSet out;
    out.reserve(p - set.size());
    for (std::size_t i = 0; i < p; ++i)
        if (!in[i]) out.push_back(i);
    return out;
}

void project_l1_ball(std::span<double> w, double radius) {
    if (norm1(w) <= radius) return;
    if (radius <= 0.0) {
        std::fill(w.begin(), w.end(), 0.0);
        return;
    }
    Vector mags(w.size());
    std::transform(w.begin(), w.end(), mags.begin(), [](double v) { return std::abs(v); });
    std::sort(mags.begin(), mags.end(), std::greater<>());
    double cumulative = 0.0;
    double shift = 0.0;
    for (std::size_t k = 0; k < mags.size(); ++k) {
        cumulative += mags[k];
        const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
        if (k + 1 == mags.size() || mags[k + 1] <= candidate) {
            shift = candidate;
            break;
        }
    }
    for (double& v : w) {
        const double shrunk = std::max(std::abs(v) - shift, 0.0);
        v = v < 0.0 ? -shrunk : shrunk;
    }
}

ConeDecomposition block_decompose(std::span<const double> delta, std::size_t s) {
    if (s < 1 || s > delta.size()) throw InputDomainError("block_decompose: need 1 <= s <= p");
    const auto order = magnitude_order(delta);
    ConeDecomposition dec{s, {}, Vector(delta.begin(), delta.end())};
    for (std::size_t start = 0; start < order.size(); start += s) {
        const std::size_t stop = std::min(start + s, order.size());
        IndexSet block(order.begin() + static_cast<std::ptrdiff_t>(start),
                       order.begin() + static_cast<std::ptrdiff_t>(stop));
        std::sort(block.begin(), block.end());
        dec.blocks.push_back(std::move(block));
    }
    return dec;
}

bool in_cone_at(std::span<const double> delta, std::span<const std::size_t> j0, double k0) {
    const double head = norm1_on(delta, j0);
    const double tail = norm1(delta) - head;
    return tail <= k0 * head * (1.0 + kConeSlack);
}

AdmissibilityWitness is_admissible(std::span<const double> delta, std::size_t s, double k0) {
    if (s < 1 || s > delta.size()) throw InputDomainError("is_admissible: need 1 <= s <= p");
    if (!(k0 > 0.0)) throw InputDomainError("is_admissible: k0 must be positive");
    if (norm_inf(delta) == 0.0) throw InputDomainError("is_admissible: delta must be non-zero");

    IndexSet t0 = top_indices(delta, s);
    AdmissibilityWitness w;
    w.k0 = k0;
    w.admissible = in_cone_at(delta, t0, k0);
    if (w.admissible) w.j0 = std::move(t0);
    return w;
}

TailSums decomposition_tail_sums(const ConeDecomposition& dec, double k0) {
    TailSums out{};
    out.head_l2 = norm2_on(dec.source, dec.blocks.front());
    for (std::size_t k = 1; k < dec.blocks.size(); ++k) out.tail_l2_sum += norm2_on(dec.source, dec.blocks[k]);
    out.l1_over_sqrt_s = norm1(dec.source) / std::sqrt(static_cast<double>(dec.s));
    out.bound_k0_plus_1 = (k0 + 1.0) * out.head_l2;
    out.total_l2 = norm2(dec.source);
    out.bound_k0_plus_2 = (k0 + 2.0) * out.head_l2;
    return out;
}

Vector sample_cone_vector(std::size_t p, std::size_t s, double k0, Rng& rng) {
    const IndexSet j0 = sample_support(p, s, rng);
    const IndexSet rest = complement(p, j0);
    Vector delta(p, 0.0);
    double head = 0.0;
    for (std::size_t i : j0) {
        delta[i] = rng.normal();
        head += std::abs(delta[i]);
    }
    double tail = 0.0;
    for (std::size_t i : rest) {
        delta[i] = std::abs(rng.normal()) * rng.rademacher();
        tail += std::abs(delta[i]);
    }
    const double u = rng.uniform();
    const double scale = tail > 0.0 ? u * k0 * head / tail : 0.0;
    for (std::size_t i : rest) delta[i] *= scale;
    return delta;
}

Vector sample_Es(const CovarianceModel& model, std::size_t s, double k0, Rng& rng) {
    if (s < 1 || 2 * s > model.p) throw InputDomainError("sample_Es: need 1 <= s <= p/2");
    Vector delta = sample_cone_vector(model.p, s, k0, rng);
    const double image = norm2(mat_vec(model.sigma_half, delta));
    for (double& v : delta) v /= image;
    return delta;
}

Vector sample_Es(const CovarianceModel& model, std::size_t s, double k0, std::uint64_t seed) {
    Rng rng(seed);
    return sample_Es(model, s, k0, rng);
}

}  // namespace rekit
