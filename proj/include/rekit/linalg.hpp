#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rekit {

using Vector = std::vector<double>;
using IndexSet = std::vector<std::size_t>;

/// Dense row-major matrix. Used for designs (n x p) and scratch work.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    Vector col(std::size_t j) const;

    const std::vector<double>& data() const { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Symmetric matrix with exactly mirrored storage.
class SymMatrix {
public:
    SymMatrix() = default;
    /// Throws InputDomainError unless m is square, non-empty and exactly symmetric.
    explicit SymMatrix(Matrix m);

    static SymMatrix identity(std::size_t n);
    /// Averages m with its transpose; for matrices that are symmetric up to round-off.
    static SymMatrix symmetrize(const Matrix& m);

    std::size_t dim() const { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const Matrix& matrix() const { return m_; }

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    Matrix m_;
};

struct EigenPair {
    Vector values;   // ascending
    Matrix vectors;  // column k pairs with values[k]
};

/// Cyclic Jacobi eigendecomposition. Throws InputDomainError on non-finite entries.
EigenPair sym_eigen(const SymMatrix& a);

/// Extreme eigenvalues only; same algorithm as sym_eigen.
struct EigenRange {
    double min;
    double max;
};
EigenRange eigen_range(const SymMatrix& a);

/// PSD square root. Eigenvalues in [-1e-10*||a||_2, 0) are clamped to zero,
/// anything more negative throws NotPsdError.
SymMatrix psd_sqrt(const SymMatrix& a);

/// Rows/columns restricted to support, which must be distinct and in range.
/// The support is used in ascending order.
SymMatrix principal_submatrix(const SymMatrix& a, std::span<const std::size_t> support);

// Products.
Vector mat_vec(const Matrix& a, std::span<const double> x);
Vector mat_vec(const SymMatrix& a, std::span<const double> x);
Vector mat_t_vec(const Matrix& a, std::span<const double> x);  // a^T x
Matrix mat_mul(const Matrix& a, const Matrix& b);
/// X^T X / scale, symmetric by construction.
SymMatrix gram(const Matrix& x, double scale);
double quad_form(const SymMatrix& a, std::span<const double> x);

// Norms.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);
double norm1(std::span<const double> x);
double norm_inf(std::span<const double> x);
double frobenius(const Matrix& a);
inline double frobenius(const SymMatrix& a) { return frobenius(a.matrix()); }

}  // namespace rekit
