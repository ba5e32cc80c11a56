#include "rekit/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rekit/errors.hpp"

namespace rekit {

namespace {

// Dense tableau for max c^T x, A x <= b, x >= 0.
// Rows 0..m-1 are constraints, row m the objective, row m+1 the phase-one
// objective. Column n is the artificial variable, column n+1 the right-hand side.
class SimplexTableau {
public:
    SimplexTableau(const Matrix& a, std::span<const double> b, std::span<const double> c, double eps)
        : m_(a.rows()), n_(a.cols()), eps_(eps), nonbasic_(n_ + 1), basic_(m_), d_(m_ + 2, n_ + 2) {
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) d_(i, j) = a(i, j);
            basic_[i] = static_cast<long>(n_ + i);
            d_(i, n_) = -1.0;
            d_(i, n_ + 1) = b[i];
        }
        for (std::size_t j = 0; j < n_; ++j) {
            nonbasic_[j] = static_cast<long>(j);
            d_(m_, j) = -c[j];
        }
        nonbasic_[n_] = -1;
        d_(m_ + 1, n_) = 1.0;
    }

    LpStatus solve(std::size_t max_pivots) {
        std::size_t r = 0;
        for (std::size_t i = 1; i < m_; ++i)
            if (d_(i, n_ + 1) < d_(r, n_ + 1)) r = i;
        if (m_ > 0 && d_(r, n_ + 1) < -eps_) {
            pivot(r, n_);
            const LpStatus phase_one = run(2, max_pivots);
            if (phase_one == LpStatus::iteration_limit) return phase_one;
            if (phase_one != LpStatus::optimal || d_(m_ + 1, n_ + 1) < -feasibility_tol()) return LpStatus::infeasible;
            // Drive the artificial variable out of the basis.
            for (std::size_t i = 0; i < m_; ++i) {
                if (basic_[i] != -1) continue;
                std::size_t s = 0;
                for (std::size_t j = 1; j <= n_; ++j)
                    if (d_(i, j) < d_(i, s) || (d_(i, j) == d_(i, s) && nonbasic_[j] < nonbasic_[s])) s = j;
                pivot(i, s);
            }
        }
        return run(1, max_pivots);
    }

    Vector primal() const {
        Vector x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basic_[i] >= 0 && static_cast<std::size_t>(basic_[i]) < n_) x[basic_[i]] = d_(i, n_ + 1);
        return x;
    }

    // Reduced costs of the slack columns are the row multipliers.
    Vector dual() const {
        Vector y(m_, 0.0);
        for (std::size_t j = 0; j <= n_; ++j) {
            const long var = nonbasic_[j];
            if (var >= static_cast<long>(n_)) y[static_cast<std::size_t>(var) - n_] = d_(m_, j);
        }
        return y;
    }

    std::size_t pivots() const { return pivots_; }

private:
    double feasibility_tol() const { return std::sqrt(eps_); }

    void pivot(std::size_t r, std::size_t s) {
        const double inv = 1.0 / d_(r, s);
        auto pivot_row = d_.row(r);
        for (std::size_t i = 0; i < m_ + 2; ++i) {
            if (i == r) continue;
            auto row = d_.row(i);
            const double factor = row[s] * inv;
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < n_ + 2; ++j) row[j] -= pivot_row[j] * factor;
            row[s] = pivot_row[s] * factor;
        }
        for (std::size_t j = 0; j < n_ + 2; ++j)
            if (j != s) pivot_row[j] *= inv;
        for (std::size_t i = 0; i < m_ + 2; ++i)
            if (i != r) d_(i, s) *= -inv;
        d_(r, s) = inv;
        std::swap(basic_[r], nonbasic_[s]);
        ++pivots_;
    }

    // Bland's rule: lowest-index improving column, lowest-index basic variable
    // among ratio-test ties.
    LpStatus run(int phase, std::size_t max_pivots) {
        const std::size_t obj = m_ + static_cast<std::size_t>(phase) - 1;
        for (;;) {
            if (pivots_ >= max_pivots) return LpStatus::iteration_limit;
            std::size_t s = n_ + 1;
            for (std::size_t j = 0; j <= n_; ++j) {
                if (nonbasic_[j] == -phase) continue;
                if (phase == 1 && nonbasic_[j] == -1) continue;
                if (d_(obj, j) < -eps_ && (s == n_ + 1 || nonbasic_[j] < nonbasic_[s])) s = j;
            }
            if (s == n_ + 1) return LpStatus::optimal;

            std::size_t r = m_;
            double best = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                if (d_(i, s) <= eps_) continue;
                const double ratio = d_(i, n_ + 1) / d_(i, s);
                if (r == m_ || ratio < best || (ratio == best && basic_[i] < basic_[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == m_) return LpStatus::unbounded;
            pivot(r, s);
        }
    }

    std::size_t m_;
    std::size_t n_;
    double eps_;
    std::vector<long> nonbasic_;
    std::vector<long> basic_;
    Matrix d_;
    std::size_t pivots_ = 0;
};

}  // namespace

LpResult solve_lp(const Matrix& a, std::span<const double> b, std::span<const double> c, double eps,
                  std::size_t max_pivots) {
    if (b.size() != a.rows() || c.size() != a.cols()) throw InputDomainError("solve_lp: dimension mismatch");
    SimplexTableau tableau(a, b, c, eps);
    LpResult out;
    out.status = tableau.solve(max_pivots);
    out.pivots = tableau.pivots();
    if (out.status != LpStatus::optimal) return out;

    out.x = tableau.primal();
    out.dual = tableau.dual();
    out.objective = dot(c, out.x);

    const Vector ax = mat_vec(a, out.x);
    for (std::size_t i = 0; i < ax.size(); ++i) out.primal_infeasibility = std::max(out.primal_infeasibility, ax[i] - b[i]);
    for (double v : out.x) out.primal_infeasibility = std::max(out.primal_infeasibility, -v);
    const Vector aty = mat_t_vec(a, out.dual);
    for (std::size_t j = 0; j < aty.size(); ++j) out.dual_infeasibility = std::max(out.dual_infeasibility, c[j] - aty[j]);
    for (double v : out.dual) out.dual_infeasibility = std::max(out.dual_infeasibility, -v);
    out.duality_gap = std::abs(dot(b, out.dual) - out.objective);
    return out;
}

double lasso_kkt_residual(const SymMatrix& gram, std::span<const double> xty, std::span<const double> beta,
                          double lambda) {
    const Vector gb = mat_vec(gram, beta);
    double worst = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        const double corr = xty[j] - gb[j];
        const double r = beta[j] == 0.0 ? std::max(std::abs(corr) - lambda, 0.0)
                                        : std::abs(corr - lambda * (beta[j] > 0.0 ? 1.0 : -1.0));
        worst = std::max(worst, r);
    }
    return worst;
}

SolverResult lasso(const Matrix& x, std::span<const double> y, double lambda, double tol, std::size_t max_iter) {
    if (!(lambda >= 0.0)) throw InputDomainError("lasso: lambda must be non-negative");
    if (x.rows() == 0 || x.cols() == 0) throw InputDomainError("lasso: empty design");
    if (y.size() != x.rows()) throw InputDomainError("lasso: dimension mismatch");

    const std::size_t p = x.cols();
    const double n = static_cast<double>(x.rows());
    const SymMatrix g = gram(x, n);
    Vector c = mat_t_vec(x, y);
    for (double& v : c) v /= n;

    SolverResult out;
    out.beta_hat.assign(p, 0.0);
    Vector& beta = out.beta_hat;
    Vector gb(p, 0.0);  // G * beta, kept in sync

    for (out.iterations = 0; out.iterations < max_iter;) {
        ++out.iterations;
        double max_change = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            const double gjj = g(j, j);
            if (gjj <= 0.0) continue;
            const double z = c[j] - gb[j] + gjj * beta[j];
            const double updated = soft_threshold(z, lambda) / gjj;
            const double change = updated - beta[j];
            if (change == 0.0) continue;
            beta[j] = updated;
            const auto gj = g.matrix().row(j);
            for (std::size_t k = 0; k < p; ++k) gb[k] += gj[k] * change;
            max_change = std::max(max_change, std::abs(change));
        }
        if (max_change < tol * (1.0 + norm_inf(beta))) {
            gb = mat_vec(g, beta);  // drop accumulated drift before the final check
            out.kkt_residual = lasso_kkt_residual(g, c, beta, lambda);
            if (out.kkt_residual <= tol) {
                out.converged = true;
                break;
            }
        }
    }
    if (!out.converged) out.kkt_residual = lasso_kkt_residual(g, c, beta, lambda);

    const Vector fitted = mat_vec(x, beta);
    double rss = 0.0;
    for (std::size_t i = 0; i < fitted.size(); ++i) rss += (y[i] - fitted[i]) * (y[i] - fitted[i]);
    out.objective_or_l1 = rss / (2.0 * n) + lambda * norm1(beta);
    return out;
}

SolverResult dantzig(const Matrix& x, std::span<const double> y, double lambda, double tol, std::size_t max_pivots) {
    if (!(lambda >= 0.0)) throw InputDomainError("dantzig: lambda must be non-negative");
    if (x.rows() == 0 || x.cols() == 0) throw InputDomainError("dantzig: empty design");
    if (y.size() != x.rows()) throw InputDomainError("dantzig: dimension mismatch");

    const std::size_t p = x.cols();
    const double n = static_cast<double>(x.rows());
    const SymMatrix g = gram(x, n);
    Vector c = mat_t_vec(x, y);
    for (double& v : c) v /= n;

    // Variables (b+, b-). Rows:  G(b+ - b-) <= c + lambda,  -G(b+ - b-) <= lambda - c.
    Matrix a(2 * p, 2 * p);
    Vector rhs(2 * p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const double gij = g(i, j);
            a(i, j) = gij;
            a(i, p + j) = -gij;
            a(p + i, j) = -gij;
            a(p + i, p + j) = gij;
        }
        rhs[i] = c[i] + lambda;
        rhs[p + i] = lambda - c[i];
    }
    const Vector cost(2 * p, -1.0);

    const LpResult lp = solve_lp(a, rhs, cost, 1e-11, max_pivots);
    SolverResult out;
    out.iterations = lp.pivots;
    out.beta_hat.assign(p, 0.0);
    if (lp.status != LpStatus::optimal) {
        out.kkt_residual = std::numeric_limits<double>::infinity();
        return out;
    }
    for (std::size_t j = 0; j < p; ++j) out.beta_hat[j] = lp.x[j] - lp.x[p + j];
    out.objective_or_l1 = norm1(out.beta_hat);

    // Constraint violation measured on the recovered beta, not the split variables.
    const Vector gb = mat_vec(g, out.beta_hat);
    double violation = 0.0;
    for (std::size_t j = 0; j < p; ++j) violation = std::max(violation, std::abs(c[j] - gb[j]) - lambda);
    out.kkt_residual = std::max({lp.duality_gap, lp.dual_infeasibility, lp.primal_infeasibility, violation});
    out.converged = out.kkt_residual <= tol;
    return out;
}

}  // namespace rekit
