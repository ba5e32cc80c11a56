#include "rekit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rekit/errors.hpp"

namespace rekit {

namespace {

constexpr double kOffDiagTol = 1e-12;
constexpr int kMaxSweeps = 100;
constexpr double kClampTol = 1e-10;
constexpr double kRoundoffEig = 1e-13;

double off_diagonal_norm(const Matrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) sum += a(i, j) * a(i, j);
    return std::sqrt(2.0 * sum);
}

// Jacobi rotations on a working copy. When vectors is non-null, accumulates V.
Vector jacobi(Matrix a, Matrix* vectors) {
    const std::size_t n = a.rows();
    for (double v : a.data()) {
        if (!std::isfinite(v)) throw InputDomainError("sym_eigen: non-finite matrix entry");
    }
    if (vectors) *vectors = Matrix::identity(n);

    const double threshold = kOffDiagTol * frobenius(a);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= threshold) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                // tan of the rotation angle, smaller root for stability
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    const double nkp = c * akp - s * akq;
                    const double nkq = s * akp + c * akq;
                    a(k, p) = a(p, k) = nkp;
                    a(k, q) = a(q, k) = nkq;
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;

                if (vectors) {
                    Matrix& v = *vectors;
                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = v(k, p);
                        const double vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    Vector diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    return diag;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw InputDomainError("Matrix: data size does not match shape");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::col(std::size_t j) const {
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) throw InputDomainError("SymMatrix: matrix must be square and non-empty");
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t j = i + 1; j < m_.cols(); ++j)
            if (m_(i, j) != m_(j, i))
                throw InputDomainError("SymMatrix: entries (" + std::to_string(i) + "," + std::to_string(j) +
                                       ") and transpose differ");
}

SymMatrix SymMatrix::identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }

SymMatrix SymMatrix::symmetrize(const Matrix& m) {
    if (m.rows() != m.cols()) throw InputDomainError("symmetrize: matrix must be square");
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out(i, i) = m(i, i);
        for (std::size_t j = i + 1; j < m.cols(); ++j) out(i, j) = out(j, i) = 0.5 * (m(i, j) + m(j, i));
    }
    return SymMatrix(std::move(out));
}

EigenPair sym_eigen(const SymMatrix& a) {
    Matrix v;
    Vector values = jacobi(a.matrix(), &v);
    const std::size_t n = values.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });

    EigenPair out{Vector(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = values[order[k]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

EigenRange eigen_range(const SymMatrix& a) {
    if (a.dim() == 1) return {a(0, 0), a(0, 0)};
    if (a.dim() == 2) {
        // closed form, avoids a sweep on the hot path of support enumeration
        const double mean = 0.5 * (a(0, 0) + a(1, 1));
        const double half = 0.5 * (a(0, 0) - a(1, 1));
        const double r = std::hypot(half, a(0, 1));
        return {mean - r, mean + r};
    }
    Vector values = jacobi(a.matrix(), nullptr);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi};
}

SymMatrix psd_sqrt(const SymMatrix& a) {
    EigenPair e = sym_eigen(a);
    const std::size_t n = a.dim();
    const double scale = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
    Vector root(n);
    for (std::size_t k = 0; k < n; ++k) {
        double lambda = e.values[k];
        if (lambda < 0.0) {
            if (lambda < -kClampTol * scale)
                throw NotPsdError("psd_sqrt: eigenvalue " + std::to_string(lambda) + " is negative");
            lambda = 0.0;
        }
        // round-off sized eigenvalues would be amplified by the square root
        if (lambda <= kRoundoffEig * scale) lambda = 0.0;
        root[k] = std::sqrt(lambda);
    }
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += e.vectors(i, k) * root[k] * e.vectors(j, k);
            s(i, j) = s(j, i) = sum;
        }
    }
    return SymMatrix(std::move(s));
}

SymMatrix principal_submatrix(const SymMatrix& a, std::span<const std::size_t> support) {
    if (support.empty()) throw InputDomainError("principal_submatrix: empty support");
    IndexSet idx(support.begin(), support.end());
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw InputDomainError("principal_submatrix: repeated index");
    if (idx.back() >= a.dim()) throw InputDomainError("principal_submatrix: index out of range");

    const std::size_t k = idx.size();
    Matrix out(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) out(i, j) = a(idx[i], idx[j]);
    return SymMatrix(std::move(out));
}

Vector mat_vec(const Matrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) throw InputDomainError("mat_vec: dimension mismatch");
    Vector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
    return out;
}

Vector mat_vec(const SymMatrix& a, std::span<const double> x) { return mat_vec(a.matrix(), x); }

Vector mat_t_vec(const Matrix& a, std::span<const double> x) {
    if (x.size() != a.rows()) throw InputDomainError("mat_t_vec: dimension mismatch");
    Vector out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        const double xi = x[i];
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += r[j] * xi;
    }
    return out;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InputDomainError("mat_mul: dimension mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto orow = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

SymMatrix gram(const Matrix& x, double scale) {
    const std::size_t p = x.cols();
    Matrix g(p, p);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto r = x.row(i);
        for (std::size_t a = 0; a < p; ++a) {
            const double ra = r[a];
            if (ra == 0.0) continue;
            for (std::size_t b = a; b < p; ++b) g(a, b) += ra * r[b];
        }
    }
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a; b < p; ++b) {
            g(a, b) /= scale;
            g(b, a) = g(a, b);
        }
    }
    return SymMatrix(std::move(g));
}

double quad_form(const SymMatrix& a, std::span<const double> x) {
    if (x.size() != a.dim()) throw InputDomainError("quad_form: dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) continue;
        sum += x[i] * dot(a.matrix().row(i), x);
    }
    return sum;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double norm1(std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += std::abs(v);
    return sum;
}

double norm_inf(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double frobenius(const Matrix& a) { return norm2(a.data()); }

}  // namespace rekit
