#pragma once

#include <cstddef>
#include <span>

#include "rekit/linalg.hpp"

namespace rekit {

struct SolverResult {
    Vector beta_hat;
    std::size_t iterations = 0;
    bool converged = false;
    double objective_or_l1 = 0.0;  // Lasso objective, or ||beta_hat||_1 for the Dantzig selector
    double kkt_residual = 0.0;     // optimality residual; duality gap for the LP
};

inline double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

/// (1/2n)||y - X b||^2 + lambda ||b||_1 by cyclic coordinate descent with
/// covariance updates. Converged when every coordinate moved less than
/// tol * (1 + ||b||_inf) during a sweep and the subgradient residual is <= tol.
SolverResult lasso(const Matrix& x, std::span<const double> y, double lambda, double tol = 1e-10,
                   std::size_t max_iter = 100'000);

/// Subgradient-optimality residual of the Lasso at beta.
double lasso_kkt_residual(const SymMatrix& gram, std::span<const double> xty, std::span<const double> beta,
                          double lambda);

/// min ||b||_1 s.t. ||X^T (y - X b) / n||_inf <= lambda, solved as an LP in
/// b = b+ - b- with the dense simplex below.
SolverResult dantzig(const Matrix& x, std::span<const double> y, double lambda, double tol = 1e-9,
                     std::size_t max_pivots = 200'000);

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Vector x;
    Vector dual;  // multipliers of the inequality rows
    double objective = 0.0;
    std::size_t pivots = 0;
    double duality_gap = 0.0;
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
};

/// maximize c^T x subject to A x <= b, x >= 0. Two-phase tableau simplex with
/// Bland's rule for both entering and leaving variables.
LpResult solve_lp(const Matrix& a, std::span<const double> b, std::span<const double> c, double eps = 1e-11,
                  std::size_t max_pivots = 200'000);

}  // namespace rekit
