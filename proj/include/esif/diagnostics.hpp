#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "esif/dense.hpp"
#include "esif/errors.hpp"
#include "esif/flops.hpp"
#include "esif/matrix.hpp"
#include "esif/rng.hpp"

namespace esif {

struct SpectrumOptions {
    idx cap = 4096;       ///< refuse densification above this size
    bool kappa_a = true;  ///< also compute kappa(A) (costs a second sym_eig)
    double tau = 0.0;     ///< a-posteriori truncation tau of the factor
    int levels = 0;       ///< factor level count (for the epsilon bound)
};

/// Spectral picture of a preconditioned matrix M = Ltilde^{-1} A Ltilde^{-T}.
struct SpectrumReport {
    Vector eigenvalues;       ///< descending
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double kappa_prec = 0.0;  ///< lambda_max / lambda_min (inf if not positive)
    idx multiplicity_one = 0; ///< eigenvalues within 1e-9 of 1
    double kappa_a = std::numeric_limits<double>::quiet_NaN(); ///< NaN if skipped
    double tau = 0.0;
    /// [(1+tau^2)^levels - 1] * kappa(A); NaN when kappa_a was skipped.
    double epsilon = std::numeric_limits<double>::quiet_NaN();
};

/// Forms M = Ltilde^{-1} A Ltilde^{-T} column by column through the factor's
/// block applications, symmetrizes it, and decomposes with sym_eig.
template <class Factor>
SpectrumReport spectrum(const Matrix& a, const Factor& f,
                        const SpectrumOptions& opt = {}) {
    const idx n = a.rows();
    if (n != a.cols()) throw DimensionMismatch("spectrum: not square");
    if (n != f.dim()) throw DimensionMismatch("spectrum: factor mismatch");
    if (n > opt.cap) throw SizeCapExceeded("spectrum: dimension exceeds cap");

    Matrix x = Matrix::identity(n);
    f.apply_inv_t_block(x); // X = Ltilde^{-T}
    Matrix g(n, n);
    gemm_acc(whole(g), whole(a), Op::none, whole(x), Op::none); // G = A X
    f.apply_inv_block(g); // M = Ltilde^{-1} G
    symmetrize(g);

    const SymEig eig = sym_eig(g, false);
    SpectrumReport rep;
    rep.eigenvalues.assign(eig.values.rbegin(), eig.values.rend());
    rep.lambda_min = eig.values.front();
    rep.lambda_max = eig.values.back();
    rep.kappa_prec = (rep.lambda_min > 0.0)
                         ? rep.lambda_max / rep.lambda_min
                         : std::numeric_limits<double>::infinity();
    for (double v : rep.eigenvalues)
        if (std::abs(v - 1.0) <= 1e-9) ++rep.multiplicity_one;
    rep.tau = opt.tau;
    if (opt.kappa_a) {
        const SymEig ea = sym_eig(a, false);
        rep.kappa_a = (ea.values.front() > 0.0)
                          ? ea.values.back() / ea.values.front()
                          : std::numeric_limits<double>::infinity();
        rep.epsilon =
            (std::pow(1.0 + opt.tau * opt.tau, opt.levels) - 1.0) * rep.kappa_a;
    }
    return rep;
}

/// Positive-semidefiniteness check of the factorization error E = Atilde - A.
struct PsdReport {
    bool is_psd = false;    ///< min_eig >= -1e-10 * ||A||_2
    double min_eig = 0.0;   ///< smallest eigenvalue of E
    double rel_err = 0.0;   ///< ||E||_2 / ||A||_2
    double norm_a = 0.0;
};

template <class Factor>
PsdReport psd_check(const Matrix& a, const Factor& f, idx cap = 4096) {
    if (a.rows() > cap) throw SizeCapExceeded("psd_check: dimension exceeds cap");
    const Matrix at = f.reconstruct(cap);
    Matrix e = at;
    for (idx j = 0; j < a.cols(); ++j)
        for (idx i = 0; i < a.rows(); ++i) e(i, j) -= a(i, j);
    const SymEig ee = sym_eig(e, false);
    PsdReport rep;
    rep.min_eig = ee.values.front();
    const double norm_e =
        std::max(std::abs(ee.values.front()), std::abs(ee.values.back()));
    rep.norm_a = sym_norm2(a);
    rep.rel_err = (rep.norm_a > 0.0) ? norm_e / rep.norm_a : 0.0;
    rep.is_psd = rep.min_eig >= -1e-10 * rep.norm_a;
    return rep;
}

/// Singular-value decay of the top-split scaled block and the two
/// condition-number curves it induces: (1+sigma)/(1-sigma) for the baseline
/// scheme and 1/(1-sigma^2) for the enhanced scheme.
struct DecayReport {
    Vector sigma;       ///< descending
    Vector sif_curve;   ///< (1+sigma_i)/(1-sigma_i)
    Vector esif_curve;  ///< 1/(1-sigma_i^2)
};

inline DecayReport decay_curves(const Matrix& a, idx split = 0, idx cap = 4096) {
    const idx n = a.rows();
    if (n != a.cols()) throw DimensionMismatch("decay_curves: not square");
    if (n > cap) throw SizeCapExceeded("decay_curves: dimension exceeds cap");
    if (split == 0) split = (n + 1) / 2;
    if (split >= n) throw ConfigError("decay_curves: split out of range");
    const idx m1 = split, m2 = n - split;

    const LowerTriangular l1 = cholesky(a.block_copy(0, 0, m1, m1));
    const LowerTriangular l2 = cholesky(a.block_copy(m1, m1, m2, m2));
    // C = L1^{-1} A12 L2^{-T}
    Matrix c = a.block_copy(0, m1, m1, m2);
    tri_solve(l1, whole(c), false);
    Matrix ct(m2, m1);
    for (idx j = 0; j < m1; ++j)
        for (idx i = 0; i < m2; ++i) ct(i, j) = c(j, i);
    tri_solve(l2, whole(ct), false);

    const ThinSvd svd = (m1 >= m2) ? thin_svd([&] {
        Matrix cc(m1, m2);
        for (idx j = 0; j < m2; ++j)
            for (idx i = 0; i < m1; ++i) cc(i, j) = ct(j, i);
        return cc;
    }())
                                   : thin_svd(ct);

    DecayReport rep;
    rep.sigma = svd.s;
    rep.sif_curve.reserve(rep.sigma.size());
    rep.esif_curve.reserve(rep.sigma.size());
    for (double s : rep.sigma) {
        const double sc = std::min(s, 1.0 - 1e-12); // guard exact-arithmetic bound
        rep.sif_curve.push_back((1.0 + sc) / (1.0 - sc));
        rep.esif_curve.push_back(1.0 / ((1.0 - sc) * (1.0 + sc)));
    }
    return rep;
}

/// Measured application cost of a factor against the 2N^2 model.
struct CostProfile {
    idx n = 0;
    std::uint64_t xi_s = 0;      ///< total ops of one Ltilde^{-1} apply
    double ratio_2n2 = 0.0;      ///< xi_s / (2 N^2)
    idx storage_total = 0;       ///< stored values in the factor
    idx trials = 0;
};

template <class Factor>
CostProfile cost_profile(const Factor& f, idx trials = 3,
                         std::uint64_t seed = 12345) {
    CostProfile prof;
    prof.n = f.dim();
    prof.trials = trials;
    std::uint64_t total = 0;
    for (idx t = 0; t < trials; ++t) {
        Vector x(prof.n);
        for (idx i = 0; i < prof.n; ++i)
            x[i] = gaussian_at(seed, t * prof.n + i);
        const FlopTally tally;
        const Vector y = f.apply_inv(x);
        (void)y;
        total += tally.delta().total();
    }
    prof.xi_s = (trials > 0) ? total / trials : 0;
    prof.ratio_2n2 =
        static_cast<double>(prof.xi_s) /
        (2.0 * static_cast<double>(prof.n) * static_cast<double>(prof.n));
    prof.storage_total = f.storage_report().total;
    return prof;
}

} // namespace esif
