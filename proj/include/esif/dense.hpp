#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "esif/errors.hpp"
#include "esif/flops.hpp"
#include "esif/matrix.hpp"

namespace esif {

// ---------------------------------------------------------------------------
// LowerTriangular: packed column-major storage of a lower-triangular factor.
// Column j stores entries j..n-1 at offset j*n - j*(j-1)/2.
// ---------------------------------------------------------------------------

class LowerTriangular {
  public:
    LowerTriangular() = default;

    explicit LowerTriangular(idx n) : n_(n), data_(n * (n + 1) / 2, 0.0) {}

    idx dim() const { return n_; }
    idx stored_entries() const { return data_.size(); }

    double& at(idx i, idx j) { return data_[offset(j) + (i - j)]; }
    double at(idx i, idx j) const { return data_[offset(j) + (i - j)]; }

    double* col(idx j) { return data_.data() + offset(j); }
    const double* col(idx j) const { return data_.data() + offset(j); }

    /// Dense n-by-n copy with zero upper triangle.
    Matrix dense() const {
        Matrix out(n_, n_);
        for (idx j = 0; j < n_; ++j)
            for (idx i = j; i < n_; ++i) out(i, j) = at(i, j);
        return out;
    }

  private:
    idx offset(idx j) const { return j * n_ - j * (j - 1) / 2; }

    idx n_ = 0;
    std::vector<double> data_;
};

/// Cholesky factorization A = L L^T of a symmetric positive definite matrix.
/// Only the lower triangle of `a` is read.  Throws NotPositiveDefinite with
/// the offending pivot index if a pivot is not strictly positive.
inline LowerTriangular cholesky(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("cholesky: not square");
    const idx n = a.rows();
    // Pivots this far below the largest diagonal entry are indistinguishable
    // from zero at working precision; accepting one would seed factor entries
    // of order 1/sqrt(pivot) and poison everything built on top.
    double dmax = 0.0;
    for (idx i = 0; i < n; ++i) dmax = std::max(dmax, a(i, i));
    const double eps = std::numeric_limits<double>::epsilon();
    const double pivot_floor = static_cast<double>(n) * eps * eps * dmax;
    LowerTriangular l(n);
    std::vector<double> work(n);
    for (idx j = 0; j < n; ++j) {
        const idx len = n - j;
        for (idx i = 0; i < len; ++i) work[i] = a(j + i, j);
        // left-looking update: col_j -= L(j,p) * L(j:,p) for p < j
        for (idx p = 0; p < j; ++p) {
            const double ljp = l.at(j, p);
            const double* lp = l.col(p) + (j - p);
            for (idx i = 0; i < len; ++i) work[i] -= ljp * lp[i];
        }
        if (j > 0) {
            detail::count_mult(j * len);
            detail::count_add(j * len);
        }
        const double pivot = work[0];
        if (!(pivot > pivot_floor))
            throw NotPositiveDefinite(pivot > 0.0
                                          ? "cholesky: pivot below roundoff floor"
                                          : "cholesky: non-positive pivot",
                                      j);
        const double d = std::sqrt(pivot);
        detail::count_sqrt();
        double* lj = l.col(j);
        lj[0] = d;
        const double inv = 1.0 / d;
        detail::count_div();
        for (idx i = 1; i < len; ++i) lj[i] = work[i] * inv;
        detail::count_mult(len - 1);
    }
    return l;
}

/// In-place triangular solve.  transpose=false solves L x = b (forward
/// substitution); transpose=true solves L^T x = b (backward substitution).
/// Cost: n divisions plus n(n-1)/2 multiplications and additions.
inline void tri_solve(const LowerTriangular& l, std::span<double> x,
                      bool transpose) {
    const idx n = l.dim();
    if (x.size() != n) throw DimensionMismatch("tri_solve: length mismatch");
    if (!transpose) {
        for (idx j = 0; j < n; ++j) {
            const double* lj = l.col(j);
            const double xj = x[j] / lj[0];
            x[j] = xj;
            for (idx i = 1; i < n - j; ++i) x[j + i] -= xj * lj[i];
        }
    } else {
        for (idx jj = n; jj-- > 0;) {
            const double* lj = l.col(jj);
            double s = x[jj];
            for (idx i = 1; i < n - jj; ++i) s -= lj[i] * x[jj + i];
            x[jj] = s / lj[0];
        }
    }
    detail::count_div(n);
    if (n > 1) {
        detail::count_mult(n * (n - 1) / 2);
        detail::count_add(n * (n - 1) / 2);
    }
}

/// Column-by-column triangular solve on a block.
inline void tri_solve(const LowerTriangular& l, MutBlock x, bool transpose) {
    if (x.rows != l.dim()) throw DimensionMismatch("tri_solve: block mismatch");
    for (idx j = 0; j < x.cols; ++j)
        tri_solve(l, std::span<double>(x.p + j * x.ld, x.rows), transpose);
}

/// y = L x or y = L^T x (dense application of the packed factor).
inline void tri_apply(const LowerTriangular& l, std::span<double> x,
                      bool transpose) {
    const idx n = l.dim();
    if (x.size() != n) throw DimensionMismatch("tri_apply: length mismatch");
    if (!transpose) {
        for (idx jj = n; jj-- > 0;) {
            const double* lj = l.col(jj);
            const double xj = x[jj];
            for (idx i = n - jj; i-- > 1;) x[jj + i] += lj[i] * xj;
            x[jj] = lj[0] * xj;
        }
    } else {
        for (idx j = 0; j < n; ++j) {
            const double* lj = l.col(j);
            double s = 0.0;
            for (idx i = 0; i < n - j; ++i) s += lj[i] * x[j + i];
            x[j] = s;
        }
    }
    detail::count_mult(n * (n + 1) / 2);
    if (n > 1) detail::count_add(n * (n - 1) / 2);
}

// ---------------------------------------------------------------------------
// Householder reflectors
// ---------------------------------------------------------------------------

/// An ordered set of Householder reflectors H_j = I - beta_j v_j v_j^T whose
/// product Q = H_0 H_1 ... H_{r-1} is the orthogonal operator of interest.
/// Reflector j has support on rows j..n-1 (leading entries of v_j are zero).
class HouseholderSet {
  public:
    HouseholderSet() = default;

    HouseholderSet(idx n, idx r) : v_(n, r), beta_(r, 0.0) {}

    idx dim() const { return v_.rows(); }
    idx count() const { return v_.cols(); }

    Matrix& vectors() { return v_; }
    const Matrix& vectors() const { return v_; }
    Vector& coefficients() { return beta_; }
    const Vector& coefficients() const { return beta_; }

    /// x := Q x (reflectors applied in reverse order).
    void apply(std::span<double> x) const {
        for (idx j = count(); j-- > 0;) reflect(j, x);
    }

    /// x := Q^T x (reflectors applied in forward order).
    void apply_transpose(std::span<double> x) const {
        for (idx j = 0; j < count(); ++j) reflect(j, x);
    }

    void apply(MutBlock x) const {
        for (idx c = 0; c < x.cols; ++c)
            apply(std::span<double>(x.p + c * x.ld, x.rows));
    }

    void apply_transpose(MutBlock x) const {
        for (idx c = 0; c < x.cols; ++c)
            apply_transpose(std::span<double>(x.p + c * x.ld, x.rows));
    }

    /// Dense n-by-n image of Q (diagnostic use).
    Matrix dense() const {
        Matrix q = Matrix::identity(dim());
        apply(whole(q));
        return q;
    }

    /// Stored values: r vectors of full length plus r coefficients.
    idx stored_entries() const { return v_.rows() * v_.cols() + beta_.size(); }

  private:
    void reflect(idx j, std::span<double> x) const {
        if (x.size() != dim())
            throw DimensionMismatch("HouseholderSet: length mismatch");
        const double beta = beta_[j];
        if (beta == 0.0) return;
        const double* v = v_.col(j) + j; // support starts at row j
        double* xs = x.data() + j;
        const idx len = dim() - j;
        double t = 0.0;
        for (idx i = 0; i < len; ++i) t += v[i] * xs[i];
        t *= beta;
        for (idx i = 0; i < len; ++i) xs[i] -= t * v[i];
        detail::count_mult(2 * len + 1);
        detail::count_add(2 * len - 1);
    }

    Matrix v_;
    Vector beta_;
};

/// Extend an n-by-r matrix with orthonormal columns to a full orthogonal
/// operator Q such that Q^T v1 = (I_r; 0): reflector j maps column j to +e_j.
/// Throws NotOrthonormal if ||v1^T v1 - I|| exceeds 1e-10 entrywise.
inline HouseholderSet householder_extend(const Matrix& v1) {
    const idx n = v1.rows();
    const idx r = v1.cols();
    if (r > n) throw DimensionMismatch("householder_extend: more cols than rows");
    if (orthonormality_defect(v1) > 1e-10)
        throw NotOrthonormal("householder_extend: columns not orthonormal");

    HouseholderSet q(n, r);
    Matrix b = v1;
    for (idx j = 0; j < r; ++j) {
        // After the previous reflections, column j is orthogonal to
        // e_0..e_{j-1}, so its leading entries vanish; work on rows j..n-1.
        const idx len = n - j;
        double* bj = b.col(j) + j;
        double rest2 = 0.0;
        for (idx i = 1; i < len; ++i) rest2 += bj[i] * bj[i];
        const double x0 = bj[0];
        const double s = std::sqrt(x0 * x0 + rest2); // ~1
        detail::count_mult(len);
        detail::count_add(len);
        detail::count_sqrt();

        double* v = q.vectors().col(j) + j;
        if (rest2 == 0.0 && x0 >= 0.0) {
            q.coefficients()[j] = 0.0; // already +s*e_j: identity reflector
            continue;
        }
        // u = x - s e; for x0 > 0 compute x0 - s as -rest2/(x0 + s) to avoid
        // cancellation.
        const double u0 = (x0 > 0.0) ? -rest2 / (x0 + s) : x0 - s;
        v[0] = u0;
        for (idx i = 1; i < len; ++i) v[i] = bj[i];
        const double utu = u0 * u0 + rest2;
        q.coefficients()[j] = 2.0 / utu;
        detail::count_div(2);
        detail::count_mult(2);
        detail::count_add(2);

        // apply the new reflector to the trailing columns
        const double beta = q.coefficients()[j];
        for (idx c = j + 1; c < r; ++c) {
            double* bc = b.col(c) + j;
            double t = 0.0;
            for (idx i = 0; i < len; ++i) t += v[i] * bc[i];
            t *= beta;
            for (idx i = 0; i < len; ++i) bc[i] -= t * v[i];
        }
        if (r > j + 1) {
            detail::count_mult((r - j - 1) * (2 * len + 1));
            detail::count_add((r - j - 1) * 2 * len);
        }
    }
    return q;
}

// ---------------------------------------------------------------------------
// QR orthonormalization
// ---------------------------------------------------------------------------

struct OrthonormalBasis {
    Matrix q;               ///< n-by-p, orthonormal columns
    bool reorthogonalized;  ///< a second pass was applied
};

/// Orthonormal basis of range(y) via Householder QR (n >= p).  Columns whose
/// triangular pivot drops below 1e-8 of the original column norm trigger one
/// re-orthogonalization pass.  Zero input columns yield canonical unit
/// columns, so the result always has exactly p orthonormal columns.
inline OrthonormalBasis qr_orthonormalize(const Matrix& y) {
    const idx n = y.rows();
    const idx p = y.cols();
    if (p > n) throw DimensionMismatch("qr_orthonormalize: more cols than rows");

    auto pass = [&](const Matrix& in, bool& degenerate) {
        Matrix a = in;
        HouseholderSet h(n, p);
        degenerate = false;
        for (idx j = 0; j < p; ++j) {
            const idx len = n - j;
            double* aj = a.col(j) + j;
            double norm0 = 0.0;
            for (idx i = 0; i < len; ++i) norm0 += aj[i] * aj[i];
            norm0 = std::sqrt(norm0);
            detail::count_mult(len);
            detail::count_add(len);
            detail::count_sqrt();
            double colnorm = 0.0;
            for (idx i = 0; i < n; ++i) colnorm += in(i, j) * in(i, j);
            colnorm = std::sqrt(colnorm);
            if (norm0 <= 1e-8 * colnorm || colnorm == 0.0) degenerate = true;
            if (norm0 == 0.0) {
                h.coefficients()[j] = 0.0; // keep e_j for this column
                continue;
            }
            // classic stable choice: reflect to -sign(a_jj)*norm*e_j
            const double sgn = (aj[0] >= 0.0) ? 1.0 : -1.0;
            const double u0 = aj[0] + sgn * norm0;
            double* v = h.vectors().col(j) + j;
            v[0] = u0;
            for (idx i = 1; i < len; ++i) v[i] = aj[i];
            double utu = u0 * u0;
            for (idx i = 1; i < len; ++i) utu += aj[i] * aj[i];
            h.coefficients()[j] = 2.0 / utu;
            detail::count_mult(len + 1);
            detail::count_add(len + 1);
            detail::count_div();
            const double beta = h.coefficients()[j];
            for (idx c = j + 1; c < p; ++c) {
                double* ac = a.col(c) + j;
                double t = 0.0;
                for (idx i = 0; i < len; ++i) t += v[i] * ac[i];
                t *= beta;
                for (idx i = 0; i < len; ++i) ac[i] -= t * v[i];
            }
            if (p > j + 1) {
                detail::count_mult((p - j - 1) * (2 * len + 1));
                detail::count_add((p - j - 1) * 2 * len);
            }
        }
        // q = H_0 ... H_{p-1} (I_p; 0)
        Matrix q(n, p);
        for (idx j = 0; j < p; ++j) q(j, j) = 1.0;
        h.apply(whole(q));
        return q;
    };

    bool degenerate = false;
    Matrix q = pass(y, degenerate);
    bool redo = degenerate;
    if (redo) {
        bool dummy = false;
        q = pass(q, dummy);
    }
    return {std::move(q), redo};
}

// ---------------------------------------------------------------------------
// thin SVD via one-sided Jacobi
// ---------------------------------------------------------------------------

struct ThinSvd {
    Matrix u;  ///< m-by-r, orthonormal columns
    Vector s;  ///< r singular values, descending
    Matrix w;  ///< r-by-r orthogonal
};

/// Thin singular value decomposition t = U diag(s) W^T of an m-by-r matrix
/// with r <= m.  One-sided Jacobi with right-rotation accumulation; throws
/// NoConvergence after the sweep cap.
inline ThinSvd thin_svd(const Matrix& t) {
    const idx m = t.rows();
    const idx r = t.cols();
    if (r > m) throw DimensionMismatch("thin_svd: more cols than rows");

    Matrix a = t;
    Matrix w = Matrix::identity(r);
    constexpr int max_sweeps = 120;
    constexpr double tol = 1e-14;
    constexpr double eps2 = std::numeric_limits<double>::epsilon() *
                            std::numeric_limits<double>::epsilon();

    bool converged = (r <= 1);
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        // Columns whose norm is below eps * (largest column norm) contribute
        // singular values under the roundoff floor; freezing them keeps the
        // pair tolerance reachable when the column scales span many orders.
        double gmax = 0.0;
        for (idx j = 0; j < r; ++j) {
            double s = 0.0;
            const double* cj = a.col(j);
            for (idx i = 0; i < m; ++i) s += cj[i] * cj[i];
            gmax = std::max(gmax, s);
        }
        detail::count_mult(r * m);
        detail::count_add(r * m);
        const double floor2 = eps2 * gmax;
        for (idx p = 0; p + 1 < r; ++p) {
            for (idx q = p + 1; q < r; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                const double* cp = a.col(p);
                const double* cq = a.col(q);
                for (idx i = 0; i < m; ++i) {
                    app += cp[i] * cp[i];
                    aqq += cq[i] * cq[i];
                    apq += cp[i] * cq[i];
                }
                detail::count_mult(3 * m);
                detail::count_add(3 * m);
                if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0 ||
                    std::min(app, aqq) <= floor2)
                    continue;
                converged = false;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double tt = ((zeta >= 0.0) ? 1.0 : -1.0) /
                                  (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + tt * tt);
                const double sn = cs * tt;
                detail::count_mult(4);
                detail::count_add(3);
                detail::count_div(3);
                detail::count_sqrt(2);
                double* mp = a.col(p);
                double* mq = a.col(q);
                for (idx i = 0; i < m; ++i) {
                    const double vp = mp[i], vq = mq[i];
                    mp[i] = cs * vp - sn * vq;
                    mq[i] = sn * vp + cs * vq;
                }
                double* wp = w.col(p);
                double* wq = w.col(q);
                for (idx i = 0; i < r; ++i) {
                    const double vp = wp[i], vq = wq[i];
                    wp[i] = cs * vp - sn * vq;
                    wq[i] = sn * vp + cs * vq;
                }
                detail::count_mult(4 * (m + r));
                detail::count_add(2 * (m + r));
            }
        }
    }
    if (!converged) throw NoConvergence("thin_svd: Jacobi sweep cap reached");

    ThinSvd out;
    out.s.assign(r, 0.0);
    out.u = Matrix(m, r);
    out.w = std::move(w);
    double smax = 0.0;
    for (idx j = 0; j < r; ++j) {
        double s = 0.0;
        const double* cj = a.col(j);
        for (idx i = 0; i < m; ++i) s += cj[i] * cj[i];
        out.s[j] = std::sqrt(s);
        smax = std::max(smax, out.s[j]);
        detail::count_mult(m);
        detail::count_add(m);
        detail::count_sqrt();
    }
    const double tiny = smax * std::numeric_limits<double>::epsilon() * m;
    for (idx j = 0; j < r; ++j) {
        if (out.s[j] > tiny && out.s[j] > 0.0) {
            const double inv = 1.0 / out.s[j];
            detail::count_div();
            const double* cj = a.col(j);
            double* uj = out.u.col(j);
            for (idx i = 0; i < m; ++i) uj[i] = cj[i] * inv;
            detail::count_mult(m);
        }
    }
    // replace (numerically) null columns with unit vectors orthogonal to the
    // rest so U always has orthonormal columns
    for (idx j = 0; j < r; ++j) {
        if (out.s[j] > tiny && out.s[j] > 0.0) continue;
        out.s[j] = 0.0;
        for (idx cand = 0; cand < m; ++cand) {
            Vector e(m, 0.0);
            e[cand] = 1.0;
            for (idx c = 0; c < r; ++c) {
                if (c == j) continue;
                if (out.s[c] == 0.0 && c > j) continue; // not yet filled
                double proj = 0.0;
                for (idx i = 0; i < m; ++i) proj += out.u(i, c) * e[i];
                for (idx i = 0; i < m; ++i) e[i] -= proj * out.u(i, c);
            }
            double nrm = 0.0;
            for (double v : e) nrm += v * v;
            nrm = std::sqrt(nrm);
            if (nrm > 0.5) {
                for (idx i = 0; i < m; ++i) out.u(i, j) = e[i] / nrm;
                break;
            }
        }
    }
    // sort descending, permuting u and w consistently
    std::vector<idx> perm(r);
    std::iota(perm.begin(), perm.end(), idx{0});
    std::stable_sort(perm.begin(), perm.end(),
                     [&](idx x, idx y) { return out.s[x] > out.s[y]; });
    ThinSvd sorted;
    sorted.s.assign(r, 0.0);
    sorted.u = Matrix(m, r);
    sorted.w = Matrix(r, r);
    for (idx j = 0; j < r; ++j) {
        sorted.s[j] = out.s[perm[j]];
        std::copy_n(out.u.col(perm[j]), m, sorted.u.col(j));
        std::copy_n(out.w.col(perm[j]), r, sorted.w.col(j));
    }
    return sorted;
}

// ---------------------------------------------------------------------------
// symmetric eigendecomposition
// ---------------------------------------------------------------------------

struct SymEig {
    Vector values;  ///< ascending
    Matrix vectors; ///< empty when not requested
};

namespace detail {

inline double hypot2(double a, double b) { return std::hypot(a, b); }

// Householder tridiagonalization; accumulates the transform in z when
// want_vectors is set (classic tred2 scheme).
inline void tridiagonalize(Matrix& z, Vector& d, Vector& e, bool want_vectors) {
    const idx n = z.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (idx i = n; i-- > 1;) {
        const idx l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (idx k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (idx k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (idx j = 0; j <= l; ++j) {
                    if (want_vectors) z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (idx k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (idx k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (idx j = 0; j <= l; ++j) {
                    f = z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (idx k = 0; k <= j; ++k)
                        z(j, k) -= f * e[k] + g * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    if (want_vectors) d[0] = 0.0;
    e[0] = 0.0;
    for (idx i = 0; i < n; ++i) {
        if (want_vectors) {
            if (d[i] != 0.0) {
                const idx l = i; // columns 0..i-1
                for (idx j = 0; j < l; ++j) {
                    double g = 0.0;
                    for (idx k = 0; k < l; ++k) g += z(i, k) * z(k, j);
                    for (idx k = 0; k < l; ++k) z(k, j) -= g * z(k, i);
                }
            }
            d[i] = z(i, i);
            z(i, i) = 1.0;
            for (idx j = 0; j < i; ++j) z(j, i) = z(i, j) = 0.0;
        } else {
            d[i] = z(i, i);
        }
    }
}

// Implicit QL with Wilkinson shifts on the tridiagonal (d, e); rotations are
// accumulated into z when want_vectors is set (classic tql2 scheme).
inline void tql(Vector& d, Vector& e, Matrix& z, bool want_vectors) {
    const idx n = d.size();
    if (n == 0) return;
    for (idx i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (idx l = 0; l < n; ++l) {
        int iter = 0;
        idx m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
                    break;
            }
            if (m != l) {
                if (++iter > 50)
                    throw NoConvergence("sym_eig: QL iteration cap reached");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (idx i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (want_vectors) {
                        for (idx k = 0; k < n; ++k) {
                            f = z(k, i + 1);
                            z(k, i + 1) = s * z(k, i) + c * f;
                            z(k, i) = c * z(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && m - l > 1) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

/// Eigendecomposition of a symmetric matrix: values ascending, orthonormal
/// eigenvectors as columns when requested.  Only the lower triangle of `a`
/// is read (the matrix is symmetrized internally).
inline SymEig sym_eig(const Matrix& a, bool want_vectors = true) {
    if (a.rows() != a.cols()) throw DimensionMismatch("sym_eig: not square");
    const idx n = a.rows();
    SymEig out;
    if (n == 0) return out;
    Matrix z = a;
    symmetrize(z);
    Vector d, e;
    detail::tridiagonalize(z, d, e, want_vectors);
    detail::tql(d, e, z, want_vectors);

    std::vector<idx> perm(n);
    std::iota(perm.begin(), perm.end(), idx{0});
    std::stable_sort(perm.begin(), perm.end(),
                     [&](idx x, idx y) { return d[x] < d[y]; });
    out.values.assign(n, 0.0);
    for (idx j = 0; j < n; ++j) out.values[j] = d[perm[j]];
    if (want_vectors) {
        out.vectors = Matrix(n, n);
        for (idx j = 0; j < n; ++j)
            std::copy_n(z.col(perm[j]), n, out.vectors.col(j));
    }
    return out;
}

/// Spectral norm (largest absolute eigenvalue) of a symmetric matrix.
inline double sym_norm2(const Matrix& a) {
    const SymEig eig = sym_eig(a, false);
    double m = 0.0;
    for (double v : eig.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace esif
