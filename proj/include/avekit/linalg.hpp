#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "avekit/errors.hpp"

namespace avekit {

using Vector = std::vector<double>;

double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);
double norm_inf(const Vector& x);

/// y += a * x
void add_scaled(Vector& y, double a, const Vector& x);
Vector scaled(const Vector& x, double a);
Vector subtract(const Vector& x, const Vector& y);
Vector abs_components(const Vector& x);

/// Dense real matrix, row-major storage.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    /// Validating constructor: rejects a size mismatch and non-finite entries.
    DenseMatrix(std::size_t rows, std::size_t cols, Vector entries);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const double* row(std::size_t i) const { return data_.data() + i * cols_; }
    double* row(std::size_t i) { return data_.data() + i * cols_; }

    const Vector& data() const { return data_; }

    /// Throws ValidationError if any entry is NaN or infinite.
    void check_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

Vector matvec(const DenseMatrix& A, const Vector& x);
/// A^T x without forming the transpose.
Vector matvec_transpose(const DenseMatrix& A, const Vector& x);
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix transpose(const DenseMatrix& A);
/// A + c*I
DenseMatrix add_scaled_identity(const DenseMatrix& A, double c);
/// Gram matrix A^T A (symmetric PSD).
DenseMatrix gram(const DenseMatrix& A);
/// Largest Euclidean norm over the rows of A; the scale used by singularity thresholds.
double max_row_norm(const DenseMatrix& A);

/// LU factorization with partial pivoting, L and U packed in one matrix.
/// Row interchanges are stored as a swap sequence: step k swapped rows k and pivot(k).
class LuFactorization {
public:
    LuFactorization(DenseMatrix packed, std::vector<std::size_t> pivots);

    std::size_t dim() const { return packed_.rows(); }
    const DenseMatrix& packed() const { return packed_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    Vector solve(const Vector& rhs) const;

private:
    DenseMatrix packed_;
    std::vector<std::size_t> pivots_;
};

/// Throws SingularMatrixError when a pivot magnitude drops below
/// 1e-12 * max_row_norm(A).
LuFactorization lu_factor(const DenseMatrix& A);
Vector solve(const LuFactorization& F, const Vector& rhs);

/// Solve A X = B column by column with one factorization of A.
DenseMatrix solve_matrix(const LuFactorization& F, const DenseMatrix& B);

/// Smallest and largest singular value of A, computed together from the
/// eigenvalue extremes of A^T A (Householder tridiagonalization followed by
/// Sturm bisection). Deterministic; accuracy is limited only by the usual
/// normal-equations squaring of the condition number.
std::pair<double, double> singular_extremes(const DenseMatrix& A);

double spectral_norm(const DenseMatrix& A);
/// Throws SingularMatrixError when A is singular to working precision
/// (smallest singular value below 1e-12 * max_row_norm(A)).
double sigma_min(const DenseMatrix& A);

} // namespace avekit
