#pragma once

#include <cstdint>
#include <span>

#include "esif/dense.hpp"
#include "esif/errors.hpp"
#include "esif/matrix.hpp"
#include "esif/rng.hpp"

namespace esif {

/// Singular values returned by compression are clamped strictly below one so
/// that sqrt(1 - sigma^2) stays real; clamp events are surfaced to callers.
inline constexpr double kSigmaClamp = 1.0 - 1e-12;

/// Result of compressing a scaled off-diagonal block C = L1^{-1} A12 L2^{-T}.
///
/// sigma holds the leading r_eff singular values (descending, clamped into
/// [0, 1)); v1 and u1 the corresponding right/left singular directions.  For
/// sketched compression the directions are exact singular pairs of the
/// restriction C*Vhat rather than of C itself, which preserves the identity
/// C*v1 = u1*sigma that the factorizations rely on.  sigma_next reports the
/// first discarded singular value: exact when the full decomposition was
/// available, otherwise the sketch's own next value (a lower bound).
struct CompressionResult {
    Vector sigma;
    Matrix v1;
    Matrix u1;
    idx r_eff = 0;
    idx clamp_count = 0;
    double sigma_next = 0.0;
    bool sigma_next_exact = false;
};

/// The scaled off-diagonal block C = L1^{-1} A12 L2^{-T} of a two-by-two
/// split, presented as a matrix-free operator.  Child1/Child2 expose the
/// half solves apply_inv (L^{-1} x) and apply_inv_t (L^{-T} x) of the
/// already-factored diagonal blocks.
template <class Child1, class Child2>
class ScaledBlockOperator {
  public:
    ScaledBlockOperator(const Child1& c1, const Child2& c2, ConstBlock a12)
        : c1_(&c1), c2_(&c2), a12_(a12) {}

    idx rows() const { return a12_.rows; }
    idx cols() const { return a12_.cols; }

    /// C v = L1^{-1} (A12 (L2^{-T} v)).
    Vector apply(std::span<const double> v) const {
        Vector t = c2_->apply_inv_t(v);
        Vector u(rows());
        matvec(a12_, t, u);
        return c1_->apply_inv(u);
    }

    /// C^T z = L2^{-1} (A12^T (L1^{-T} z)).
    Vector apply_transpose(std::span<const double> z) const {
        Vector t = c1_->apply_inv_t(z);
        Vector u(cols());
        matvec_t(a12_, t, u);
        return c2_->apply_inv(u);
    }

  private:
    const Child1* c1_;
    const Child2* c2_;
    ConstBlock a12_;
};

/// Entry bound for scaled blocks and their sketches.  For a numerically SPD
/// input the scaled block satisfies ||C|| < 1 up to roundoff, so its entries
/// -- and those of Y = C^T Z, T = C Vhat -- stay modest; magnitudes anywhere
/// near this limit mean a diagonal factor was effectively singular and the
/// input is not positive definite at working precision.  The limit is also
/// low enough that downstream Gram sums cannot overflow.
inline constexpr double kScaledBlockLimit = 1e50;

namespace detail {

inline void clamp_sigma(CompressionResult& res) {
    for (double& s : res.sigma) {
        if (s >= kSigmaClamp) {
            s = kSigmaClamp;
            ++res.clamp_count;
        }
    }
}

inline void check_scaled_block(const Matrix& g, const char* where) {
    for (idx j = 0; j < g.cols(); ++j) {
        const double* cj = g.col(j);
        for (idx i = 0; i < g.rows(); ++i) {
            if (!(std::abs(cj[i]) <= kScaledBlockLimit)) // catches NaN too
                throw NumericalBreakdown(
                    std::string(where) +
                    ": scaled block blow-up (input not positive definite "
                    "at working precision)");
        }
    }
}

} // namespace detail

/// Randomized rank-r compression of a scaled block operator.
///
/// Sketches the row space with r + oversample Gaussian probes (counter-based
/// stream `seed`), orthonormalizes Y = C^T Z, and takes the thin SVD of the
/// restriction T = C Vhat.  The sketch width is clamped to min(rows, cols),
/// as is the returned rank, so full-rank requests are valid.  Requires
/// r >= 1 (RankTooLarge otherwise).
template <class Operator>
CompressionResult compress_scaled_block(const Operator& op, idx r, idx oversample,
                                        std::uint64_t seed) {
    const idx m = op.rows();
    const idx n = op.cols();
    if (r < 1) throw RankTooLarge("compress_scaled_block: rank must be >= 1");
    const idx k = std::min(m, n);
    const idx r_eff = std::min(r, k);
    const idx p = std::min(r + oversample, k);

    // Y = C^T Z, one probe per column.
    Matrix z = gaussian_matrix(seed, m, p);
    Matrix y(n, p);
    for (idx j = 0; j < p; ++j) {
        const Vector yj = op.apply_transpose(z.col_span(j));
        std::copy(yj.begin(), yj.end(), y.col(j));
    }
    detail::check_scaled_block(y, "compress_scaled_block");
    const Matrix vhat = qr_orthonormalize(y).q;

    // T = C Vhat restricted to the sketch subspace.
    Matrix t(m, p);
    for (idx j = 0; j < p; ++j) {
        const Vector tj = op.apply(vhat.col_span(j));
        std::copy(tj.begin(), tj.end(), t.col(j));
    }
    detail::check_scaled_block(t, "compress_scaled_block");
    const ThinSvd svd = thin_svd(t);

    CompressionResult res;
    res.r_eff = r_eff;
    res.sigma.assign(svd.s.begin(), svd.s.begin() + r_eff);
    res.u1 = svd.u.block_copy(0, 0, m, r_eff);
    // v1 = Vhat * W[:, 0..r_eff)
    res.v1 = Matrix(n, r_eff);
    gemm_acc(whole(res.v1), whole(vhat), Op::none,
             block(svd.w, 0, 0, p, r_eff), Op::none);
    if (p > r_eff) {
        res.sigma_next = svd.s[r_eff];
        res.sigma_next_exact = false;
    } else {
        res.sigma_next = 0.0;
        res.sigma_next_exact = (r_eff == k);
    }
    detail::clamp_sigma(res);
    return res;
}

/// Exact compression: forms C densely column by column and takes its full
/// SVD.  Diagnostic-grade; refuses blocks whose larger dimension exceeds
/// `cap`.  The returned result carries all min(m, n) singular values
/// (r_eff = k); use truncate_compression to cut it to a working rank.
template <class Operator>
CompressionResult explicit_scaled_block(const Operator& op, idx cap = 4096) {
    const idx m = op.rows();
    const idx n = op.cols();
    if (std::max(m, n) > cap)
        throw SizeCapExceeded("explicit_scaled_block: block exceeds diagnostics cap");
    const idx k = std::min(m, n);

    Matrix c(m, n);
    Vector e(n, 0.0);
    for (idx j = 0; j < n; ++j) {
        e[j] = 1.0;
        const Vector cj = op.apply(e);
        std::copy(cj.begin(), cj.end(), c.col(j));
        e[j] = 0.0;
    }
    detail::check_scaled_block(c, "explicit_scaled_block");

    CompressionResult res;
    res.r_eff = k;
    if (m >= n) {
        const ThinSvd svd = thin_svd(c);
        res.sigma = svd.s;
        res.u1 = svd.u;
        res.v1 = svd.w; // n == k: W is the full right factor
    } else {
        // transpose and swap the roles of the factors
        Matrix ct(n, m);
        for (idx j = 0; j < m; ++j)
            for (idx i = 0; i < n; ++i) ct(i, j) = c(j, i);
        const ThinSvd svd = thin_svd(ct);
        res.sigma = svd.s;
        res.u1 = svd.w;
        res.v1 = svd.u;
    }
    res.sigma_next = 0.0;
    res.sigma_next_exact = true;
    detail::clamp_sigma(res);
    return res;
}

/// Truncate a full compression to rank r, recording the exact next singular
/// value.  Clamp counts are recomputed for the surviving values.
inline CompressionResult truncate_compression(const CompressionResult& full,
                                              idx r) {
    if (r < 1) throw RankTooLarge("truncate_compression: rank must be >= 1");
    const idx r_eff = std::min(r, full.r_eff);
    CompressionResult res;
    res.r_eff = r_eff;
    res.sigma.assign(full.sigma.begin(), full.sigma.begin() + r_eff);
    res.v1 = full.v1.block_copy(0, 0, full.v1.rows(), r_eff);
    res.u1 = full.u1.block_copy(0, 0, full.u1.rows(), r_eff);
    if (r_eff < full.r_eff) {
        res.sigma_next = full.sigma[r_eff];
        res.sigma_next_exact = full.sigma_next_exact;
    } else {
        res.sigma_next = full.sigma_next;
        res.sigma_next_exact = full.sigma_next_exact;
    }
    for (double s : res.sigma)
        if (s >= kSigmaClamp) ++res.clamp_count;
    return res;
}

} // namespace esif
