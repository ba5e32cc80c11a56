#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rekit/linalg.hpp"
#include "rekit/model.hpp"
#include "rekit/rng.hpp"

namespace rekit {

/// Relative slack on cone inequalities, absorbs round-off when a vector sits
/// exactly on the cone boundary.
inline constexpr double kConeSlack = 1e-12;

/// Indices of the k largest |x_i| (ties broken by ascending index), returned
/// in ascending index order.
IndexSet top_indices(std::span<const double> x, std::size_t k);

/// x restricted to the index set, zero elsewhere.
Vector restrict_to(std::span<const double> x, std::span<const std::size_t> set);
double norm1_on(std::span<const double> x, std::span<const std::size_t> set);
double norm2_on(std::span<const double> x, std::span<const std::size_t> set);
IndexSet complement(std::size_t p, std::span<const std::size_t> set);

/// Euclidean projection of w onto the l1 ball of the given radius.
void project_l1_ball(std::span<double> w, double radius);

/// Greedy partition T0, T1, ..., TK into size-s blocks by descending magnitude.
/// Each block is stored in ascending index order.
struct ConeDecomposition {
    std::size_t s = 0;
    std::vector<IndexSet> blocks;
    Vector source;
};

ConeDecomposition block_decompose(std::span<const double> delta, std::size_t s);

struct AdmissibilityWitness {
    bool admissible = false;
    IndexSet j0;  // T0 when admissible, empty otherwise
    double k0 = 0.0;
};

/// ||delta_{J0^c}||_1 <= k0 ||delta_{J0}||_1 for some |J0| <= s. Checking J0 = T0
/// is necessary and sufficient. Throws InputDomainError on delta = 0.
AdmissibilityWitness is_admissible(std::span<const double> delta, std::size_t s, double k0);

/// Cone test at a given support J0 (not necessarily T0).
bool in_cone_at(std::span<const double> delta, std::span<const std::size_t> j0, double k0);

struct TailSums {
    double tail_l2_sum;      // sum_{k>=1} ||delta_{T_k}||_2
    double l1_over_sqrt_s;   // ||delta||_1 / sqrt(s)
    double bound_k0_plus_1;  // (k0+1) ||delta_{T0}||_2
    double total_l2;         // ||delta||_2
    double bound_k0_plus_2;  // (k0+2) ||delta_{T0}||_2
    double head_l2;          // ||delta_{T0}||_2
};

TailSums decomposition_tail_sums(const ConeDecomposition& dec, double k0);

/// Unnormalized cone vector: support J0 uniform of size s, Gaussian entries on
/// J0, random-sign Gaussian magnitudes off J0 rescaled so that
/// ||delta_{J0^c}||_1 = u k0 ||delta_{J0}||_1 with u ~ U[0,1).
Vector sample_cone_vector(std::size_t p, std::size_t s, double k0, Rng& rng);

/// Draw from E_s: a cone vector normalized so ||Sigma^{1/2} delta||_2 = 1.
Vector sample_Es(const CovarianceModel& model, std::size_t s, double k0, std::uint64_t seed);
Vector sample_Es(const CovarianceModel& model, std::size_t s, double k0, Rng& rng);

}  // namespace rekit
