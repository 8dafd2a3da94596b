#include "avekit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace avekit {

namespace {

void require_same_dim(const Vector& x, const Vector& y, const char* what) {
    if (x.size() != y.size())
        throw DimensionError(std::string(what) + ": vector lengths differ");
}

} // namespace

double dot(const Vector& x, const Vector& y) {
    require_same_dim(x, y, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

double norm_inf(const Vector& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

void add_scaled(Vector& y, double a, const Vector& x) {
    require_same_dim(x, y, "add_scaled");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

Vector scaled(const Vector& x, double a) {
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i];
    return y;
}

Vector subtract(const Vector& x, const Vector& y) {
    require_same_dim(x, y, "subtract");
    Vector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
    return z;
}

Vector abs_components(const Vector& x) {
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::abs(x[i]);
    return y;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0)
        throw ValidationError("DenseMatrix: dimensions must be positive");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0)
        throw ValidationError("DenseMatrix: dimensions must be positive");
    if (data_.size() != rows * cols)
        throw DimensionError("DenseMatrix: entry count does not match rows*cols");
    check_finite();
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

void DenseMatrix::check_finite() const {
    for (double v : data_)
        if (!std::isfinite(v))
            throw ValidationError("DenseMatrix: non-finite entry");
}

Vector matvec(const DenseMatrix& A, const Vector& x) {
    if (A.cols() != x.size()) throw DimensionError("matvec: cols(A) != dim(x)");
    Vector y(A.rows(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double* ai = A.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j) s += ai[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec_transpose(const DenseMatrix& A, const Vector& x) {
    if (A.rows() != x.size()) throw DimensionError("matvec_transpose: rows(A) != dim(x)");
    Vector y(A.cols(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double* ai = A.row(i);
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < A.cols(); ++j) y[j] += ai[j] * xi;
    }
    return y;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.cols() != B.rows()) throw DimensionError("matmul: inner dimensions differ");
    DenseMatrix C(A.rows(), B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        double* ci = C.row(i);
        for (std::size_t k = 0; k < A.cols(); ++k) {
            const double aik = A(i, k);
            if (aik == 0.0) continue;
            const double* bk = B.row(k);
            for (std::size_t j = 0; j < B.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return C;
}

DenseMatrix transpose(const DenseMatrix& A) {
    DenseMatrix T(A.cols(), A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
    return T;
}

DenseMatrix add_scaled_identity(const DenseMatrix& A, double c) {
    if (!A.square()) throw DimensionError("add_scaled_identity: matrix not square");
    DenseMatrix B = A;
    for (std::size_t i = 0; i < A.rows(); ++i) B(i, i) += c;
    return B;
}

DenseMatrix gram(const DenseMatrix& A) {
    const std::size_t n = A.cols();
    DenseMatrix G(n, n);
    // accumulate the upper triangle row block by row block, then mirror
    for (std::size_t k = 0; k < A.rows(); ++k) {
        const double* ak = A.row(k);
        for (std::size_t i = 0; i < n; ++i) {
            const double aki = ak[i];
            if (aki == 0.0) continue;
            double* gi = G.row(i);
            for (std::size_t j = i; j < n; ++j) gi[j] += aki * ak[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) G(i, j) = G(j, i);
    return G;
}

double max_row_norm(const DenseMatrix& A) {
    double m = 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double* ai = A.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j) s += ai[j] * ai[j];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

LuFactorization::LuFactorization(DenseMatrix packed, std::vector<std::size_t> pivots)
    : packed_(std::move(packed)), pivots_(std::move(pivots)) {
    if (!packed_.square() || pivots_.size() != packed_.rows())
        throw DimensionError("LuFactorization: inconsistent factor shapes");
}

Vector LuFactorization::solve(const Vector& rhs) const {
    const std::size_t n = dim();
    if (rhs.size() != n) throw DimensionError("solve: dim(rhs) != n");
    Vector x = rhs;
    for (std::size_t k = 0; k < n; ++k)
        if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
    // L y = P rhs, unit lower triangle
    for (std::size_t i = 1; i < n; ++i) {
        const double* li = packed_.row(i);
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= li[j] * x[j];
        x[i] = s;
    }
    // U x = y
    for (std::size_t ii = n; ii-- > 0;) {
        const double* ui = packed_.row(ii);
        double s = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= ui[j] * x[j];
        x[ii] = s / ui[ii];
    }
    return x;
}

LuFactorization lu_factor(const DenseMatrix& A) {
    if (!A.square()) throw DimensionError("lu_factor: matrix not square");
    const std::size_t n = A.rows();
    const double threshold = 1e-12 * max_row_norm(A);
    DenseMatrix lu = A;
    std::vector<std::size_t> piv(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best <= threshold)
            throw SingularMatrixError("lu_factor: pivot below singularity threshold");
        piv[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
        const double pivot = lu(k, k);
        const double* rowk = lu.row(k);
        for (std::size_t i = k + 1; i < n; ++i) {
            double* rowi = lu.row(i);
            const double m = rowi[k] / pivot;
            rowi[k] = m;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) rowi[j] -= m * rowk[j];
        }
    }
    return LuFactorization(std::move(lu), std::move(piv));
}

Vector solve(const LuFactorization& F, const Vector& rhs) { return F.solve(rhs); }

DenseMatrix solve_matrix(const LuFactorization& F, const DenseMatrix& B) {
    const std::size_t n = F.dim();
    if (B.rows() != n) throw DimensionError("solve_matrix: rows(B) != n");
    DenseMatrix X(n, B.cols());
    Vector col(n);
    for (std::size_t j = 0; j < B.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = B(i, j);
        const Vector xj = F.solve(col);
        for (std::size_t i = 0; i < n; ++i) X(i, j) = xj[i];
    }
    return X;
}

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form
// (EISPACK tred1 lineage, lower triangle, no eigenvector accumulation).
// On return d holds the diagonal and e[1..n-1] the subdiagonal of T.
// The contents of a are destroyed. All inner loops run along rows so the
// reduction stays cache-friendly on row-major storage.
void sym_tridiagonalize(DenseMatrix& a, Vector& d, Vector& e) {
    const std::size_t n = a.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    Vector w(n, 0.0);
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double* v = a.row(i); // becomes the Householder vector
            double scale = 0.0;
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(v[k]);
            if (scale == 0.0) {
                e[i] = v[l];
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    v[k] /= scale;
                    h += v[k] * v[k];
                }
                const double f = v[l];
                const double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                v[l] = f - g;

                // w = A v over the active block, accumulated row by row
                for (std::size_t k = 0; k <= l; ++k) w[k] = 0.0;
                for (std::size_t k = 0; k <= l; ++k) {
                    const double* ak = a.row(k);
                    const double vk = v[k];
                    double s = 0.0;
                    for (std::size_t j = 0; j < k; ++j) {
                        s += ak[j] * v[j];
                        w[j] += ak[j] * vk;
                    }
                    w[k] += s + ak[k] * vk;
                }
                // w <- w/h - (v^T w / 2h^2) v
                double vw = 0.0;
                for (std::size_t k = 0; k <= l; ++k) {
                    w[k] /= h;
                    vw += w[k] * v[k];
                }
                const double hh = vw / (h + h);
                for (std::size_t k = 0; k <= l; ++k) w[k] -= hh * v[k];
                // A <- A - v w^T - w v^T, lower triangle only
                for (std::size_t j = 0; j <= l; ++j) {
                    const double vj = v[j];
                    const double wj = w[j];
                    double* aj = a.row(j);
                    for (std::size_t k = 0; k <= j; ++k) aj[k] -= vj * w[k] + wj * v[k];
                }
            }
        } else {
            e[i] = a(i, l);
        }
        if (i == 1) break;
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
}

// Eigenvalues of the symmetric tridiagonal (d, e) strictly below x,
// counted with a Sturm sequence.
std::size_t sturm_count(const Vector& d, const Vector& e, double x, double pivmin) {
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        q = (i == 0) ? d[0] - x : d[i] - x - e[i] * e[i] / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

// Bisect for the eigenvalue at the boundary where sturm_count first reaches
// `want` eigenvalues below the probe.
double bisect_eigenvalue(const Vector& d, const Vector& e, double lo, double hi,
                         std::size_t want, double pivmin) {
    const double span = std::max(std::abs(lo), std::abs(hi));
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * span +
                       2.0 * pivmin;
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(d, e, mid, pivmin) >= want)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> tridiag_eig_extremes(const Vector& d, const Vector& e) {
    const std::size_t n = d.size();
    double lo = d[0], hi = d[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(e[i]) : 0.0) + (i + 1 < n ? std::abs(e[i + 1]) : 0.0);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    double emax = 0.0;
    for (std::size_t i = 1; i < n; ++i) emax = std::max(emax, e[i] * e[i]);
    const double pivmin = std::numeric_limits<double>::min() /
                          std::numeric_limits<double>::epsilon() * std::max(1.0, emax);
    const double lambda_min = bisect_eigenvalue(d, e, lo, hi, 1, pivmin);
    const double lambda_max = bisect_eigenvalue(d, e, lo, hi, n, pivmin);
    return {lambda_min, lambda_max};
}

} // namespace

std::pair<double, double> singular_extremes(const DenseMatrix& A) {
    DenseMatrix G = gram(A);
    Vector d, e;
    if (G.rows() == 1) {
        d = {G(0, 0)};
        e = {0.0};
    } else {
        sym_tridiagonalize(G, d, e);
    }
    const auto [lmin, lmax] = tridiag_eig_extremes(d, e);
    return {std::sqrt(std::max(0.0, lmin)), std::sqrt(std::max(0.0, lmax))};
}

double spectral_norm(const DenseMatrix& A) { return singular_extremes(A).second; }

double sigma_min(const DenseMatrix& A) {
    if (!A.square()) throw DimensionError("sigma_min: matrix not square");
    const auto [smin, smax] = singular_extremes(A);
    // The Gram-matrix route resolves lambda_min only down to eps*lambda_max,
    // i.e. sigma_min down to ~sqrt(eps)*sigma_max. Below that floor the matrix
    // is singular as far as this kernel can tell.
    const double floor = 10.0 * std::sqrt(std::numeric_limits<double>::epsilon()) * smax;
    if (smin <= std::max(floor, 1e-12 * max_row_norm(A)))
        throw SingularMatrixError("sigma_min: matrix singular to working precision");
    return smin;
}

} // namespace avekit
