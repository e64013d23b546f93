#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "esif/compression.hpp"
#include "esif/dense.hpp"
#include "esif/errors.hpp"
#include "esif/flops.hpp"
#include "esif/matrix.hpp"
#include "esif/partition.hpp"
#include "esif/rng.hpp"

namespace esif {

/// How the scaled off-diagonal blocks are compressed during a build.
enum class CompressionKind {
    randomized,   ///< matrix-free Gaussian sketch (production path)
    explicit_svd, ///< dense block + full SVD, truncated (oracle path)
};

/// Default stabilization cap for the baseline factorization (SifFactor).
/// The baseline replaces the off-diagonal block by a truncation whose error
/// is indefinite, so at deeper levels the measured singular values of the
/// scaled blocks can drift to (or past) one; a factor assembled from such
/// values is nearly singular and useless as a preconditioner.  Lowering every
/// kept value to this cap keeps the factor well conditioned at the price of a
/// bounded extra approximation error.  The enhanced factorization never needs
/// the cap: its error is positive semidefinite, which keeps the scaled-block
/// singular values strictly below one by construction.
inline constexpr double kSifSigmaCap = 0.96;

struct FactorOptions {
    idx rank = 5;
    idx oversample = 8;
    std::uint64_t seed = 0;
    CompressionKind compression = CompressionKind::randomized;
    idx explicit_cap = 4096; ///< size guard for the explicit-SVD path
    /// Stabilization cap on kept singular values, honoured only by the
    /// baseline (SifFactor) build; EsifFactor ignores it.  Set to
    /// kSigmaClamp to disable stabilization and run the plain scheme.
    double sif_sigma_cap = kSifSigmaCap;
};

/// Storage consumed by a factor, in stored double values (the referenced
/// input matrix is not counted).
struct StorageReport {
    idx total = 0;
    idx leaf_values = 0;
    idx node_values = 0;
    idx leaves = 0;
    idx interior_nodes = 0;
};

namespace detail {

// Adapter presenting one node of a recursive factor as a solve handle for
// ScaledBlockOperator.
template <class Factor>
struct SubFactor {
    const Factor* f;
    int id;

    Vector apply_inv(std::span<const double> x) const {
        Vector y(x.begin(), x.end());
        f->node_apply_inv(id, MutBlock{y.data(), y.size(), y.size(), 1});
        return y;
    }

    Vector apply_inv_t(std::span<const double> x) const {
        Vector y(x.begin(), x.end());
        f->node_apply_inv_t(id, MutBlock{y.data(), y.size(), y.size(), 1});
        return y;
    }
};

} // namespace detail

/// Multilevel enhanced structured incomplete factorization of a dense SPD
/// matrix.
///
/// The factor follows the recursive two-by-two split of a PartitionPlan.
/// Leaves hold dense Cholesky factors.  An interior node over the split
///   A = [[A11, A12], [A12^T, A22]]
/// keeps the off-diagonal block exact inside a block-triangular frame and
/// truncates only the product C^T C of the scaled block C = L1^{-1} A12
/// L2^{-T}: with (sigma, v1) the leading singular pairs of C and Q the
/// Householder extension of v1,
///   Ltilde = [[L1, 0], [A12^T L1^{-T}, L2 Q SigmaTilde]],
/// where SigmaTilde = diag(sqrt(1 - sigma_i^2), ..., 1, ...).  The
/// approximation Ltilde Ltilde^T = A + E adds a positive semidefinite E, so
/// the factor exists unconditionally at every level.
///
/// The factor stores only the leaf Cholesky factors and per-node (Q, sigma);
/// applications read the off-diagonal blocks directly from the input matrix,
/// which must therefore outlive the factor.
class EsifFactor {
  public:
    EsifFactor() = default;

    static EsifFactor build(const Matrix& a, const PartitionPlan& plan,
                            const FactorOptions& opt) {
        if (a.rows() != a.cols())
            throw DimensionMismatch("EsifFactor: matrix not square");
        if (a.rows() != plan.n())
            throw DimensionMismatch("EsifFactor: plan does not match matrix");
        EsifFactor f;
        f.a_ = &a;
        f.plan_ = plan;
        f.opt_ = opt;
        f.nodes_.resize(plan.node_count());
        const FlopTally tally;
        f.build_node(0);
        f.build_flops_ = tally.delta();
        return f;
    }

    idx dim() const { return plan_.n(); }
    const PartitionPlan& plan() const { return plan_; }
    const FactorOptions& options() const { return opt_; }

    /// y = Ltilde^{-1} x.
    Vector apply_inv(std::span<const double> x) const {
        check_len(x.size());
        Vector y(x.begin(), x.end());
        node_apply_inv(0, MutBlock{y.data(), dim(), dim(), 1});
        return y;
    }

    /// y = Ltilde^{-T} x.
    Vector apply_inv_t(std::span<const double> x) const {
        check_len(x.size());
        Vector y(x.begin(), x.end());
        node_apply_inv_t(0, MutBlock{y.data(), dim(), dim(), 1});
        return y;
    }

    /// y = Ltilde x.
    Vector apply(std::span<const double> x) const {
        check_len(x.size());
        Vector y(x.begin(), x.end());
        node_apply(0, MutBlock{y.data(), dim(), dim(), 1});
        return y;
    }

    /// Column-wise in-place block forms of the three applications.
    void apply_inv_block(Matrix& x) const {
        check_len(x.rows());
        node_apply_inv(0, whole(x));
    }
    void apply_inv_t_block(Matrix& x) const {
        check_len(x.rows());
        node_apply_inv_t(0, whole(x));
    }
    void apply_block(Matrix& x) const {
        check_len(x.rows());
        node_apply(0, whole(x));
    }

    /// Dense Atilde = Ltilde Ltilde^T (diagnostic; refuses dim() > cap).
    Matrix reconstruct(idx cap = 4096) const {
        if (dim() > cap)
            throw SizeCapExceeded("reconstruct: dimension exceeds cap");
        Matrix l = Matrix::identity(dim());
        node_apply(0, whole(l));
        Matrix at(dim(), dim());
        gemm_acc(whole(at), whole(l), Op::none, whole(l), Op::transpose);
        symmetrize(at);
        return at;
    }

    StorageReport storage_report() const {
        StorageReport rep;
        for (const auto& nd : nodes_) {
            if (nd.leaf) {
                const idx v = nd.chol.stored_entries();
                rep.leaf_values += v;
                ++rep.leaves;
            } else {
                const idx v = nd.q.stored_entries() + nd.sigma.size();
                rep.node_values += v;
                ++rep.interior_nodes;
            }
        }
        rep.total = rep.leaf_values + rep.node_values;
        return rep;
    }

    // build statistics -------------------------------------------------------

    idx clamp_count() const { return clamp_count_; }
    idx clamped_nodes() const { return clamped_nodes_; }

    /// Largest first-discarded singular value across nodes (the a-posteriori
    /// tau of the truncation bounds); exact when built with explicit
    /// compression, a sketch-based lower estimate otherwise.
    double tau() const { return tau_; }
    bool tau_exact() const { return tau_exact_; }

    const FlopCounter& build_flops() const { return build_flops_; }

    /// Per-node truncation record: (node id, sigma values kept).
    const Vector& node_sigma(idx id) const { return nodes_[id].sigma; }

  private:
    friend struct detail::SubFactor<EsifFactor>;

    struct NodeRec {
        idx begin = 0;
        idx size = 0;
        bool leaf = true;
        int c1 = -1;
        int c2 = -1;
        LowerTriangular chol;  // leaves only
        HouseholderSet q;      // interior: extension of v1
        Vector sigma;          // interior: kept singular values
        Vector sigma_tilde;    // sqrt(1 - sigma^2), length r_eff
        Vector inv_sigma_tilde;
    };

    void check_len(idx len) const {
        if (len != dim()) throw DimensionMismatch("EsifFactor: length mismatch");
    }

    ConstBlock a12_view(const NodeRec& nd) const {
        const idx m1 = nodes_[nd.c1].size;
        const idx m2 = nodes_[nd.c2].size;
        return block(*a_, nd.begin, nd.begin + m1, m1, m2);
    }

    void build_node(int id) {
        const PartitionNode& pn = plan_.node(id);
        NodeRec& nd = nodes_[id];
        nd.begin = pn.begin;
        nd.size = pn.size();
        if (pn.is_leaf()) {
            nd.leaf = true;
            nd.chol = cholesky(a_->block_copy(pn.begin, pn.begin, nd.size, nd.size));
            return;
        }
        nd.leaf = false;
        nd.c1 = pn.child1;
        nd.c2 = pn.child2;
        build_node(nd.c1);
        build_node(nd.c2);

        const detail::SubFactor<EsifFactor> s1{this, nd.c1};
        const detail::SubFactor<EsifFactor> s2{this, nd.c2};
        const ScaledBlockOperator op(s1, s2, a12_view(nd));

        CompressionResult cr;
        if (opt_.compression == CompressionKind::randomized) {
            cr = compress_scaled_block(op, opt_.rank, opt_.oversample,
                                       mix64(opt_.seed, static_cast<std::uint64_t>(id)));
        } else {
            cr = truncate_compression(explicit_scaled_block(op, opt_.explicit_cap),
                                      opt_.rank);
        }
        clamp_count_ += cr.clamp_count;
        if (cr.clamp_count > 0) ++clamped_nodes_;
        if (cr.sigma_next > tau_) tau_ = cr.sigma_next;
        if (!cr.sigma_next_exact) tau_exact_ = false;

        nd.sigma = std::move(cr.sigma);
        nd.q = householder_extend(cr.v1);
        const idx r = nd.sigma.size();
        nd.sigma_tilde.assign(r, 1.0);
        nd.inv_sigma_tilde.assign(r, 1.0);
        for (idx i = 0; i < r; ++i) {
            // 1 - s^2 computed as (1-s)(1+s): stable for s near 1
            const double st = std::sqrt((1.0 - nd.sigma[i]) * (1.0 + nd.sigma[i]));
            nd.sigma_tilde[i] = st;
            nd.inv_sigma_tilde[i] = 1.0 / st;
        }
        detail::count_mult(r);
        detail::count_add(2 * r);
        detail::count_sqrt(r);
        detail::count_div(r);
    }

    // x := Ltilde^{-1} x, restricted to this node's rows.
    void node_apply_inv(int id, MutBlock x) const {
        const NodeRec& nd = nodes_[id];
        if (nd.leaf) {
            tri_solve(nd.chol, x, false);
            return;
        }
        const idx m1 = nodes_[nd.c1].size;
        const idx m2 = nodes_[nd.c2].size;
        MutBlock x1{x.p, x.ld, m1, x.cols};
        MutBlock x2{x.p + m1, x.ld, m2, x.cols};

        node_apply_inv(nd.c1, x1); // y1 = L1^{-1} x1
        Matrix t(m1, x.cols);
        for (idx c = 0; c < x.cols; ++c) std::copy_n(x1.p + c * x1.ld, m1, t.col(c));
        node_apply_inv_t(nd.c1, whole(t)); // L1^{-T} y1
        gemm_acc(x2, a12_view(nd), Op::transpose, whole(t), Op::none, -1.0);
        node_apply_inv(nd.c2, x2); // w = L2^{-1} (x2 - A12^T L1^{-T} y1)
        for (idx c = 0; c < x.cols; ++c) {
            std::span<double> col(x2.p + c * x2.ld, m2);
            nd.q.apply_transpose(col);
            for (idx i = 0; i < nd.inv_sigma_tilde.size(); ++i)
                col[i] *= nd.inv_sigma_tilde[i];
        }
        detail::count_mult(nd.inv_sigma_tilde.size() * x.cols);
    }

    // x := Ltilde^{-T} x, restricted to this node's rows.
    void node_apply_inv_t(int id, MutBlock x) const {
        const NodeRec& nd = nodes_[id];
        if (nd.leaf) {
            tri_solve(nd.chol, x, true);
            return;
        }
        const idx m1 = nodes_[nd.c1].size;
        const idx m2 = nodes_[nd.c2].size;
        MutBlock x1{x.p, x.ld, m1, x.cols};
        MutBlock x2{x.p + m1, x.ld, m2, x.cols};

        // t2 = L2^{-T} (Q Sigma^{-1} x2)
        for (idx c = 0; c < x.cols; ++c) {
            std::span<double> col(x2.p + c * x2.ld, m2);
            for (idx i = 0; i < nd.inv_sigma_tilde.size(); ++i)
                col[i] *= nd.inv_sigma_tilde[i];
            nd.q.apply(col);
        }
        detail::count_mult(nd.inv_sigma_tilde.size() * x.cols);
        node_apply_inv_t(nd.c2, x2);

        // y1 = L1^{-T} (x1 - L1^{-1} (A12 t2))
        Matrix u(m1, x.cols);
        gemm_acc(whole(u), a12_view(nd), Op::none,
                 ConstBlock{x2.p, x2.ld, m2, x.cols}, Op::none);
        node_apply_inv(nd.c1, whole(u));
        for (idx c = 0; c < x.cols; ++c) {
            double* xc = x1.p + c * x1.ld;
            const double* uc = u.col(c);
            for (idx i = 0; i < m1; ++i) xc[i] -= uc[i];
        }
        detail::count_add(m1 * x.cols);
        node_apply_inv_t(nd.c1, x1);
    }

    // x := Ltilde x, restricted to this node's rows.
    void node_apply(int id, MutBlock x) const {
        const NodeRec& nd = nodes_[id];
        if (nd.leaf) {
            for (idx c = 0; c < x.cols; ++c)
                tri_apply(nd.chol, std::span<double>(x.p + c * x.ld, nd.size), false);
            return;
        }
        const idx m1 = nodes_[nd.c1].size;
        const idx m2 = nodes_[nd.c2].size;
        MutBlock x1{x.p, x.ld, m1, x.cols};
        MutBlock x2{x.p + m1, x.ld, m2, x.cols};

        // v2 = L2 (Q (SigmaTilde x2))
        for (idx c = 0; c < x.cols; ++c) {
            std::span<double> col(x2.p + c * x2.ld, m2);
            for (idx i = 0; i < nd.sigma_tilde.size(); ++i)
                col[i] *= nd.sigma_tilde[i];
            nd.q.apply(col);
        }
        detail::count_mult(nd.sigma_tilde.size() * x.cols);
        node_apply(nd.c2, x2);

        // y2 = A12^T (L1^{-T} x1) + v2; y1 = L1 x1
        Matrix t(m1, x.cols);
        for (idx c = 0; c < x.cols; ++c) std::copy_n(x1.p + c * x1.ld, m1, t.col(c));
        node_apply_inv_t(nd.c1, whole(t));
        gemm_acc(x2, a12_view(nd), Op::transpose, whole(t), Op::none, 1.0);
        node_apply(nd.c1, x1);
    }

    const Matrix* a_ = nullptr;
    PartitionPlan plan_;
    FactorOptions opt_;
    std::vector<NodeRec> nodes_;
    idx clamp_count_ = 0;
    idx clamped_nodes_ = 0;
    double tau_ = 0.0;
    bool tau_exact_ = true;
    FlopCounter build_flops_;
};

} // namespace esif
