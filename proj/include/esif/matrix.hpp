#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "esif/errors.hpp"
#include "esif/flops.hpp"

namespace esif {

using idx = std::size_t;
using Vector = std::vector<double>;

/// Dense column-major matrix of doubles.
///
/// Element (i, j) lives at data()[i + j*rows()].  Column-major layout is
/// part of the I/O contract: serialized matrices and views handed to the
/// kernels all assume it.
class Matrix {
  public:
    Matrix() = default;

    Matrix(idx rows, idx cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Matrix identity(idx n) {
        Matrix m(n, n);
        for (idx i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    idx rows() const { return rows_; }
    idx cols() const { return cols_; }

    double& operator()(idx i, idx j) { return data_[i + j * rows_]; }
    double operator()(idx i, idx j) const { return data_[i + j * rows_]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double* col(idx j) { return data_.data() + j * rows_; }
    const double* col(idx j) const { return data_.data() + j * rows_; }

    std::span<double> col_span(idx j) { return {col(j), rows_}; }
    std::span<const double> col_span(idx j) const { return {col(j), rows_}; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    /// Copy of the rectangular block starting at (r0, c0).
    Matrix block_copy(idx r0, idx c0, idx m, idx n) const {
        Matrix out(m, n);
        for (idx j = 0; j < n; ++j)
            std::copy_n(col(c0 + j) + r0, m, out.col(j));
        return out;
    }

    /// Write `b` into the block starting at (r0, c0).
    void set_block(idx r0, idx c0, const Matrix& b) {
        for (idx j = 0; j < b.cols(); ++j)
            std::copy_n(b.col(j), b.rows(), col(c0 + j) + r0);
    }

  private:
    idx rows_ = 0;
    idx cols_ = 0;
    std::vector<double> data_;
};

/// Read-only view of a contiguous block inside a column-major array.
struct ConstBlock {
    const double* p = nullptr;
    idx ld = 0;
    idx rows = 0;
    idx cols = 0;

    double operator()(idx i, idx j) const { return p[i + j * ld]; }
};

/// Mutable view of a contiguous block inside a column-major array.
struct MutBlock {
    double* p = nullptr;
    idx ld = 0;
    idx rows = 0;
    idx cols = 0;

    double& operator()(idx i, idx j) const { return p[i + j * ld]; }
    operator ConstBlock() const { return {p, ld, rows, cols}; }
};

inline ConstBlock block(const Matrix& a, idx r0, idx c0, idx m, idx n) {
    return {a.data() + r0 + c0 * a.rows(), a.rows(), m, n};
}

inline MutBlock block(Matrix& a, idx r0, idx c0, idx m, idx n) {
    return {a.data() + r0 + c0 * a.rows(), a.rows(), m, n};
}

inline ConstBlock whole(const Matrix& a) { return block(a, 0, 0, a.rows(), a.cols()); }
inline MutBlock whole(Matrix& a) { return block(a, 0, 0, a.rows(), a.cols()); }

// ---------------------------------------------------------------------------
// vector kernels
// ---------------------------------------------------------------------------

inline double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionMismatch("dot: length mismatch");
    double s = 0.0;
    for (idx i = 0; i < x.size(); ++i) s += x[i] * y[i];
    if (!x.empty()) {
        detail::count_mult(x.size());
        detail::count_add(x.size() - 1);
    }
    return s;
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw DimensionMismatch("axpy: length mismatch");
    for (idx i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
    detail::count_mult(x.size());
    detail::count_add(x.size());
}

inline void scale(double alpha, std::span<double> x) {
    for (double& v : x) v *= alpha;
    detail::count_mult(x.size());
}

inline double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    if (!x.empty()) {
        detail::count_mult(x.size());
        detail::count_add(x.size() - 1);
    }
    detail::count_sqrt();
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// matrix-vector kernels
//
// Fresh products follow the documented convention: an m-by-n product costs
// m*n multiplications and m*(n-1) additions.
// ---------------------------------------------------------------------------

/// y = A x.
inline void matvec(ConstBlock a, std::span<const double> x, std::span<double> y) {
    if (x.size() != a.cols || y.size() != a.rows)
        throw DimensionMismatch("matvec: shape mismatch");
    std::fill(y.begin(), y.end(), 0.0);
    for (idx j = 0; j < a.cols; ++j) {
        const double xj = x[j];
        const double* cp = a.p + j * a.ld;
        for (idx i = 0; i < a.rows; ++i) y[i] += cp[i] * xj;
    }
    if (a.cols > 0) {
        detail::count_mult(a.rows * a.cols);
        detail::count_add(a.rows * (a.cols - 1));
    }
}

/// y = A^T x.
inline void matvec_t(ConstBlock a, std::span<const double> x, std::span<double> y) {
    if (x.size() != a.rows || y.size() != a.cols)
        throw DimensionMismatch("matvec_t: shape mismatch");
    for (idx j = 0; j < a.cols; ++j) {
        const double* cp = a.p + j * a.ld;
        double s = 0.0;
        for (idx i = 0; i < a.rows; ++i) s += cp[i] * x[i];
        y[j] = s;
    }
    if (a.rows > 0) {
        detail::count_mult(a.rows * a.cols);
        detail::count_add(a.cols * (a.rows - 1));
    }
}

inline Vector matvec(const Matrix& a, const Vector& x) {
    Vector y(a.rows());
    matvec(whole(a), x, y);
    return y;
}

inline Vector matvec_t(const Matrix& a, const Vector& x) {
    Vector y(a.cols());
    matvec_t(whole(a), x, y);
    return y;
}

// ---------------------------------------------------------------------------
// blocked GEMM
//
// Accumulating products (C += op(A) op(B)) cost m*n*k multiplications and
// m*n*k additions.  The kernel blocks for cache and unrolls four output
// columns; results are identical to the naive triple loop.
// ---------------------------------------------------------------------------

enum class Op { none, transpose };

namespace detail {

inline constexpr idx kBlockM = 192;
inline constexpr idx kBlockK = 256;

// C (m x n) += alpha * A (m x k) * B (k x n)
inline void gemm_nn(MutBlock c, ConstBlock a, ConstBlock b, double alpha) {
    const idx m = c.rows, n = c.cols, k = a.cols;
    for (idx pc = 0; pc < k; pc += kBlockK) {
        const idx kb = std::min(kBlockK, k - pc);
        for (idx ic = 0; ic < m; ic += kBlockM) {
            const idx mb = std::min(kBlockM, m - ic);
            idx j = 0;
            for (; j + 4 <= n; j += 4) {
                double* c0 = c.p + ic + j * c.ld;
                double* c1 = c0 + c.ld;
                double* c2 = c1 + c.ld;
                double* c3 = c2 + c.ld;
                for (idx p = pc; p < pc + kb; ++p) {
                    const double* ap = a.p + ic + p * a.ld;
                    const double b0 = alpha * b.p[p + j * b.ld];
                    const double b1 = alpha * b.p[p + (j + 1) * b.ld];
                    const double b2 = alpha * b.p[p + (j + 2) * b.ld];
                    const double b3 = alpha * b.p[p + (j + 3) * b.ld];
                    for (idx i = 0; i < mb; ++i) {
                        const double av = ap[i];
                        c0[i] += av * b0;
                        c1[i] += av * b1;
                        c2[i] += av * b2;
                        c3[i] += av * b3;
                    }
                }
            }
            for (; j < n; ++j) {
                double* cj = c.p + ic + j * c.ld;
                for (idx p = pc; p < pc + kb; ++p) {
                    const double* ap = a.p + ic + p * a.ld;
                    const double bv = alpha * b.p[p + j * b.ld];
                    for (idx i = 0; i < mb; ++i) cj[i] += ap[i] * bv;
                }
            }
        }
    }
}

// C (m x n) += alpha * A^T (m x k, stored k x m) * B (k x n)
inline void gemm_tn(MutBlock c, ConstBlock a, ConstBlock b, double alpha) {
    const idx m = c.rows, n = c.cols, k = a.rows;
    for (idx j = 0; j < n; ++j) {
        const double* bj = b.p + j * b.ld;
        double* cj = c.p + j * c.ld;
        idx i = 0;
        for (; i + 4 <= m; i += 4) {
            const double* a0 = a.p + i * a.ld;
            const double* a1 = a0 + a.ld;
            const double* a2 = a1 + a.ld;
            const double* a3 = a2 + a.ld;
            double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
            for (idx p = 0; p < k; ++p) {
                const double bv = bj[p];
                s0 += a0[p] * bv;
                s1 += a1[p] * bv;
                s2 += a2[p] * bv;
                s3 += a3[p] * bv;
            }
            cj[i] += alpha * s0;
            cj[i + 1] += alpha * s1;
            cj[i + 2] += alpha * s2;
            cj[i + 3] += alpha * s3;
        }
        for (; i < m; ++i) {
            const double* ai = a.p + i * a.ld;
            double s = 0.0;
            for (idx p = 0; p < k; ++p) s += ai[p] * bj[p];
            cj[i] += alpha * s;
        }
    }
}

// C (m x n) += alpha * A (m x k) * B^T (k x n, stored n x k)
inline void gemm_nt(MutBlock c, ConstBlock a, ConstBlock b, double alpha) {
    const idx m = c.rows, n = c.cols, k = a.cols;
    for (idx pc = 0; pc < k; pc += kBlockK) {
        const idx kb = std::min(kBlockK, k - pc);
        for (idx ic = 0; ic < m; ic += kBlockM) {
            const idx mb = std::min(kBlockM, m - ic);
            idx j = 0;
            for (; j + 4 <= n; j += 4) {
                double* c0 = c.p + ic + j * c.ld;
                double* c1 = c0 + c.ld;
                double* c2 = c1 + c.ld;
                double* c3 = c2 + c.ld;
                for (idx p = pc; p < pc + kb; ++p) {
                    const double* ap = a.p + ic + p * a.ld;
                    const double b0 = alpha * b.p[j + p * b.ld];
                    const double b1 = alpha * b.p[j + 1 + p * b.ld];
                    const double b2 = alpha * b.p[j + 2 + p * b.ld];
                    const double b3 = alpha * b.p[j + 3 + p * b.ld];
                    for (idx i = 0; i < mb; ++i) {
                        const double av = ap[i];
                        c0[i] += av * b0;
                        c1[i] += av * b1;
                        c2[i] += av * b2;
                        c3[i] += av * b3;
                    }
                }
            }
            for (; j < n; ++j) {
                double* cj = c.p + ic + j * c.ld;
                for (idx p = pc; p < pc + kb; ++p) {
                    const double* ap = a.p + ic + p * a.ld;
                    const double bv = alpha * b.p[j + p * b.ld];
                    for (idx i = 0; i < mb; ++i) cj[i] += ap[i] * bv;
                }
            }
        }
    }
}

} // namespace detail

/// C += alpha * op(A) * op(B).  Shapes are validated against C.
inline void gemm_acc(MutBlock c, ConstBlock a, Op opa, ConstBlock b, Op opb,
                     double alpha = 1.0) {
    const idx am = (opa == Op::none) ? a.rows : a.cols;
    const idx ak = (opa == Op::none) ? a.cols : a.rows;
    const idx bk = (opb == Op::none) ? b.rows : b.cols;
    const idx bn = (opb == Op::none) ? b.cols : b.rows;
    if (am != c.rows || bn != c.cols || ak != bk)
        throw DimensionMismatch("gemm_acc: shape mismatch");
    if (c.rows == 0 || c.cols == 0 || ak == 0) return;

    if (opa == Op::none && opb == Op::none)
        detail::gemm_nn(c, a, b, alpha);
    else if (opa == Op::transpose && opb == Op::none)
        detail::gemm_tn(c, a, b, alpha);
    else if (opa == Op::none && opb == Op::transpose)
        detail::gemm_nt(c, a, b, alpha);
    else {
        // A^T * B^T: fall back to (B*A)^T done column by column; not used on
        // hot paths.
        Matrix tmp(c.cols, c.rows);
        gemm_acc(whole(tmp), b, Op::none, a, Op::none, 1.0);
        for (idx j = 0; j < c.cols; ++j)
            for (idx i = 0; i < c.rows; ++i) c(i, j) += alpha * tmp(j, i);
        return; // flops already counted by the recursive call
    }
    detail::count_mult(c.rows * c.cols * ak);
    detail::count_add(c.rows * c.cols * ak);
}

/// Fresh product op(A) * op(B).
inline Matrix multiply(const Matrix& a, Op opa, const Matrix& b, Op opb) {
    const idx m = (opa == Op::none) ? a.rows() : a.cols();
    const idx n = (opb == Op::none) ? b.cols() : b.rows();
    Matrix c(m, n);
    gemm_acc(whole(c), whole(a), opa, whole(b), opb, 1.0);
    return c;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    return multiply(a, Op::none, b, Op::none);
}

// ---------------------------------------------------------------------------
// small helpers
// ---------------------------------------------------------------------------

inline void symmetrize(Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("symmetrize: not square");
    for (idx j = 0; j < a.cols(); ++j)
        for (idx i = j + 1; i < a.rows(); ++i) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }
}

inline double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (idx j = 0; j < a.cols(); ++j)
        for (idx i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (idx j = 0; j < a.cols(); ++j)
        for (idx i = 0; i < a.rows(); ++i)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

/// Deviation of A^T A from the identity, measured entrywise.
inline double orthonormality_defect(const Matrix& a) {
    double m = 0.0;
    for (idx j = 0; j < a.cols(); ++j)
        for (idx i = j; i < a.cols(); ++i) {
            double s = 0.0;
            for (idx p = 0; p < a.rows(); ++p) s += a(p, i) * a(p, j);
            m = std::max(m, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    return m;
}

} // namespace esif
