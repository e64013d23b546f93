#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "esif/compression.hpp"
#include "esif/dense.hpp"
#include "esif/errors.hpp"
#include "esif/esif_factor.hpp"
#include "esif/flops.hpp"
#include "esif/matrix.hpp"
#include "esif/partition.hpp"
#include "esif/rng.hpp"

namespace esif {

/// Multilevel structured incomplete factorization (the baseline scheme).
///
/// An interior node replaces the scaled off-diagonal block C = L1^{-1} A12
/// L2^{-T} by its rank-r truncation Chat = U1 Sigma1 V1^T inside a
/// block-triangular factor
///   Ltilde = diag(L1, L2) [[I, 0], [Chat^T, Dtilde]],  Dtilde = Q SigmaTilde,
/// with Q the Householder extension of V1.  Unlike the enhanced scheme the
/// replacement error is indefinite, so positive definiteness of the
/// approximation is conditional; singular values at or above one are counted
/// as breakdown events.  To keep the factor usable past breakdown, every kept
/// singular value is additionally lowered to opt.sif_sigma_cap (stabilization
/// events are counted separately); without the cap a single clamped value
/// puts a near-zero diagonal entry into Dtilde and the preconditioner
/// degenerates.
///
/// Given the same seed, a node draws the identical sketch as the enhanced
/// factorization (the per-node streams coincide), which makes the two schemes
/// directly comparable.
class SifFactor {
  public:
    SifFactor() = default;

    static SifFactor build(const Matrix& a, const PartitionPlan& plan,
                           const FactorOptions& opt) {
        if (a.rows() != a.cols())
            throw DimensionMismatch("SifFactor: matrix not square");
        if (a.rows() != plan.n())
            throw DimensionMismatch("SifFactor: plan does not match matrix");
        SifFactor f;
        f.plan_ = plan;
        f.opt_ = opt;
        f.nodes_.resize(plan.node_count());
        const FlopTally tally;
        f.build_node(0, a);
        f.build_flops_ = tally.delta();
        return f;
    }

    idx dim() const { return plan_.n(); }
    const PartitionPlan& plan() const { return plan_; }

    Vector apply_inv(std::span<const double> x) const {
        check_len(x.size());
        Vector y(x.begin(), x.end());
        node_apply_inv(0, MutBlock{y.data(), dim(), dim(), 1});
        return y;
    }

    Vector apply_inv_t(std::span<const double> x) const {
        check_len(x.size());
        Vector y(x.begin(), x.end());
        node_apply_inv_t(0, MutBlock{y.data(), dim(), dim(), 1});
        return y;
    }

    Vector apply(std::span<const double> x) const {
        check_len(x.size());
        Vector y(x.begin(), x.end());
        node_apply(0, MutBlock{y.data(), dim(), dim(), 1});
        return y;
    }

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
                rep.leaf_values += nd.chol.stored_entries();
                ++rep.leaves;
            } else {
                rep.node_values += nd.q.stored_entries() + nd.sigma.size() +
                                   nd.u1.rows() * nd.u1.cols();
                ++rep.interior_nodes;
            }
        }
        rep.total = rep.leaf_values + rep.node_values;
        return rep;
    }

    idx breakdown_count() const { return breakdown_count_; }
    idx clamp_count() const { return breakdown_count_; }
    /// Kept singular values lowered to opt.sif_sigma_cap (includes the
    /// breakdown values, which are capped like any other).
    idx stabilized_count() const { return stabilized_count_; }
    double tau() const { return tau_; }
    bool tau_exact() const { return tau_exact_; }
    const FlopCounter& build_flops() const { return build_flops_; }

    /// Per-node truncation record: sigma values kept at interior node `id`.
    const Vector& node_sigma(idx id) const { return nodes_[id].sigma; }

  private:
    friend struct detail::SubFactor<SifFactor>;

    struct NodeRec {
        idx begin = 0;
        idx size = 0;
        bool leaf = true;
        int c1 = -1;
        int c2 = -1;
        LowerTriangular chol;
        HouseholderSet q;     // extension of v1
        Matrix u1;            // left singular directions, m1 x r_eff
        Vector sigma;
        Vector sigma_tilde;
        Vector inv_sigma_tilde;
        Vector sigma_ratio;   // sigma / sigma_tilde
    };

    void check_len(idx len) const {
        if (len != dim()) throw DimensionMismatch("SifFactor: length mismatch");
    }

    void build_node(int id, const Matrix& a) {
        const PartitionNode& pn = plan_.node(id);
        NodeRec& nd = nodes_[id];
        nd.begin = pn.begin;
        nd.size = pn.size();
        if (pn.is_leaf()) {
            nd.leaf = true;
            nd.chol = cholesky(a.block_copy(pn.begin, pn.begin, nd.size, nd.size));
            return;
        }
        nd.leaf = false;
        nd.c1 = pn.child1;
        nd.c2 = pn.child2;
        build_node(nd.c1, a);
        build_node(nd.c2, a);

        const idx m1 = nodes_[nd.c1].size;
        const idx m2 = nodes_[nd.c2].size;
        const ConstBlock a12 = block(a, pn.begin, pn.begin + m1, m1, m2);
        const detail::SubFactor<SifFactor> s1{this, nd.c1};
        const detail::SubFactor<SifFactor> s2{this, nd.c2};
        const ScaledBlockOperator op(s1, s2, a12);

        CompressionResult cr;
        if (opt_.compression == CompressionKind::randomized) {
            cr = compress_scaled_block(op, opt_.rank, opt_.oversample,
                                       mix64(opt_.seed, static_cast<std::uint64_t>(id)));
        } else {
            cr = truncate_compression(explicit_scaled_block(op, opt_.explicit_cap),
                                      opt_.rank);
        }
        breakdown_count_ += cr.clamp_count;
        if (cr.sigma_next > tau_) tau_ = cr.sigma_next;
        if (!cr.sigma_next_exact) tau_exact_ = false;

        nd.sigma = std::move(cr.sigma);
        const double cap = std::min(opt_.sif_sigma_cap, kSigmaClamp);
        for (double& s : nd.sigma) {
            if (s > cap) {
                s = cap;
                ++stabilized_count_;
            }
        }
        nd.u1 = std::move(cr.u1);
        nd.q = householder_extend(cr.v1);
        const idx r = nd.sigma.size();
        nd.sigma_tilde.assign(r, 1.0);
        nd.inv_sigma_tilde.assign(r, 1.0);
        nd.sigma_ratio.assign(r, 0.0);
        for (idx i = 0; i < r; ++i) {
            const double st = std::sqrt((1.0 - nd.sigma[i]) * (1.0 + nd.sigma[i]));
            nd.sigma_tilde[i] = st;
            nd.inv_sigma_tilde[i] = 1.0 / st;
            nd.sigma_ratio[i] = nd.sigma[i] / st;
        }
        detail::count_mult(r);
        detail::count_add(2 * r);
        detail::count_sqrt(r);
        detail::count_div(2 * r);
    }

    // y1 = u1; y2 = SigmaTilde^{-1} (Q^T u2 - (Sigma1 U1^T u1; 0)),
    // where u1 = L1^{-1} x1, u2 = L2^{-1} x2.
    void node_apply_inv(int id, MutBlock x) const {
        const NodeRec& nd = nodes_[id];
        if (nd.leaf) {
            tri_solve(nd.chol, x, false);
            return;
        }
        const idx m1 = nodes_[nd.c1].size;
        const idx m2 = nodes_[nd.c2].size;
        const idx r = nd.sigma.size();
        MutBlock x1{x.p, x.ld, m1, x.cols};
        MutBlock x2{x.p + m1, x.ld, m2, x.cols};

        node_apply_inv(nd.c1, x1);
        node_apply_inv(nd.c2, x2);

        Matrix g(r, x.cols);
        gemm_acc(whole(g), whole(nd.u1), Op::transpose,
                 ConstBlock{x1.p, x1.ld, m1, x.cols}, Op::none);
        for (idx c = 0; c < x.cols; ++c) {
            std::span<double> col(x2.p + c * x2.ld, m2);
            nd.q.apply_transpose(col);
            for (idx i = 0; i < r; ++i)
                col[i] = (col[i] - nd.sigma[i] * g(i, c)) * nd.inv_sigma_tilde[i];
        }
        detail::count_mult(2 * r * x.cols);
        detail::count_add(r * x.cols);
    }

    // y2 = L2^{-T} (Q SigmaTilde^{-1} x2);
    // y1 = L1^{-T} (x1 - U1 Sigma1 (SigmaTilde^{-1} x2)[0:r]).
    void node_apply_inv_t(int id, MutBlock x) const {
        const NodeRec& nd = nodes_[id];
        if (nd.leaf) {
            tri_solve(nd.chol, x, true);
            return;
        }
        const idx m1 = nodes_[nd.c1].size;
        const idx m2 = nodes_[nd.c2].size;
        const idx r = nd.sigma.size();
        MutBlock x1{x.p, x.ld, m1, x.cols};
        MutBlock x2{x.p + m1, x.ld, m2, x.cols};

        Matrix g(r, x.cols);
        for (idx c = 0; c < x.cols; ++c) {
            std::span<double> col(x2.p + c * x2.ld, m2);
            for (idx i = 0; i < r; ++i) {
                g(i, c) = nd.sigma_ratio[i] * col[i];
                col[i] *= nd.inv_sigma_tilde[i];
            }
            nd.q.apply(col);
        }
        detail::count_mult(2 * r * x.cols);
        node_apply_inv_t(nd.c2, x2);

        gemm_acc(x1, whole(nd.u1), Op::none, whole(g), Op::none, -1.0);
        node_apply_inv_t(nd.c1, x1);
    }

    // y1 = L1 x1; y2 = L2 (Q ((Sigma1 U1^T x1; 0) + SigmaTilde x2)).
    void node_apply(int id, MutBlock x) const {
        const NodeRec& nd = nodes_[id];
        if (nd.leaf) {
            for (idx c = 0; c < x.cols; ++c)
                tri_apply(nd.chol, std::span<double>(x.p + c * x.ld, nd.size), false);
            return;
        }
        const idx m1 = nodes_[nd.c1].size;
        const idx m2 = nodes_[nd.c2].size;
        const idx r = nd.sigma.size();
        MutBlock x1{x.p, x.ld, m1, x.cols};
        MutBlock x2{x.p + m1, x.ld, m2, x.cols};

        Matrix g(r, x.cols);
        gemm_acc(whole(g), whole(nd.u1), Op::transpose,
                 ConstBlock{x1.p, x1.ld, m1, x.cols}, Op::none);
        for (idx c = 0; c < x.cols; ++c) {
            std::span<double> col(x2.p + c * x2.ld, m2);
            for (idx i = 0; i < r; ++i)
                col[i] = col[i] * nd.sigma_tilde[i] + nd.sigma[i] * g(i, c);
            nd.q.apply(col);
        }
        detail::count_mult(2 * r * x.cols);
        detail::count_add(r * x.cols);
        node_apply(nd.c2, x2);
        node_apply(nd.c1, x1);
    }

    PartitionPlan plan_;
    FactorOptions opt_;
    std::vector<NodeRec> nodes_;
    idx breakdown_count_ = 0;
    idx stabilized_count_ = 0;
    double tau_ = 0.0;
    bool tau_exact_ = true;
    FlopCounter build_flops_;
};

/// Block-diagonal Cholesky preconditioner over the leaves of a partition
/// plan: the off-diagonal coupling is simply dropped.
class BdiagFactor {
  public:
    BdiagFactor() = default;

    static BdiagFactor build(const Matrix& a, const PartitionPlan& plan) {
        if (a.rows() != a.cols())
            throw DimensionMismatch("BdiagFactor: matrix not square");
        if (a.rows() != plan.n())
            throw DimensionMismatch("BdiagFactor: plan does not match matrix");
        BdiagFactor f;
        f.n_ = plan.n();
        const FlopTally tally;
        for (idx id = 0; id < plan.node_count(); ++id) {
            const PartitionNode& nd = plan.node(id);
            if (!nd.is_leaf()) continue;
            f.offsets_.push_back(nd.begin);
            f.blocks_.push_back(
                cholesky(a.block_copy(nd.begin, nd.begin, nd.size(), nd.size())));
        }
        f.build_flops_ = tally.delta();
        return f;
    }

    idx dim() const { return n_; }

    Vector apply_inv(std::span<const double> x) const {
        Vector y(x.begin(), x.end());
        apply_blocks(MutBlock{y.data(), n_, n_, 1}, false);
        return y;
    }

    Vector apply_inv_t(std::span<const double> x) const {
        Vector y(x.begin(), x.end());
        apply_blocks(MutBlock{y.data(), n_, n_, 1}, true);
        return y;
    }

    Vector apply(std::span<const double> x) const {
        Vector y(x.begin(), x.end());
        for (idx b = 0; b < blocks_.size(); ++b)
            tri_apply(blocks_[b],
                      std::span<double>(y.data() + offsets_[b], blocks_[b].dim()),
                      false);
        return y;
    }

    void apply_inv_block(Matrix& x) const { apply_blocks(whole(x), false); }
    void apply_inv_t_block(Matrix& x) const { apply_blocks(whole(x), true); }
    void apply_block(Matrix& x) const {
        for (idx c = 0; c < x.cols(); ++c)
            for (idx b = 0; b < blocks_.size(); ++b)
                tri_apply(blocks_[b],
                          std::span<double>(x.col(c) + offsets_[b], blocks_[b].dim()),
                          false);
    }

    Matrix reconstruct(idx cap = 4096) const {
        if (n_ > cap) throw SizeCapExceeded("reconstruct: dimension exceeds cap");
        Matrix at(n_, n_);
        for (idx b = 0; b < blocks_.size(); ++b) {
            const Matrix lb = blocks_[b].dense();
            Matrix blk(lb.rows(), lb.cols());
            gemm_acc(whole(blk), whole(lb), Op::none, whole(lb), Op::transpose);
            at.set_block(offsets_[b], offsets_[b], blk);
        }
        return at;
    }

    StorageReport storage_report() const {
        StorageReport rep;
        for (const auto& b : blocks_) {
            rep.leaf_values += b.stored_entries();
            ++rep.leaves;
        }
        rep.total = rep.leaf_values;
        return rep;
    }

    idx clamp_count() const { return 0; }
    double tau() const { return 0.0; }
    bool tau_exact() const { return true; }
    const FlopCounter& build_flops() const { return build_flops_; }

  private:
    void apply_blocks(MutBlock x, bool transpose) const {
        if (x.rows != n_) throw DimensionMismatch("BdiagFactor: length mismatch");
        for (idx c = 0; c < x.cols; ++c)
            for (idx b = 0; b < blocks_.size(); ++b)
                tri_solve(blocks_[b],
                          std::span<double>(x.p + c * x.ld + offsets_[b],
                                            blocks_[b].dim()),
                          transpose);
    }

    idx n_ = 0;
    std::vector<idx> offsets_;
    std::vector<LowerTriangular> blocks_;
    FlopCounter build_flops_;
};

} // namespace esif
