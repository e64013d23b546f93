#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "esif/baselines.hpp"
#include "esif/dense.hpp"
#include "esif/diagnostics.hpp"
#include "esif/esif_factor.hpp"
#include "esif/matrix.hpp"
#include "esif/partition.hpp"
#include "esif/rng.hpp"

namespace esif::verify {

/// Seeded random SPD test matrix: G G^T + 0.1 n I with Gaussian G.  The
/// shift keeps the Cholesky pivots comfortably positive while leaving the
/// scaled off-diagonal blocks with a slowly decaying singular spectrum.
inline Matrix random_spd(idx n, std::uint64_t seed) {
    const Matrix g = gaussian_matrix(seed, n, n);
    Matrix a(n, n);
    gemm_acc(whole(a), whole(g), Op::none, whole(g), Op::transpose);
    symmetrize(a);
    const double shift = 0.1 * static_cast<double>(n);
    for (idx i = 0; i < n; ++i) a(i, i) += shift;
    return a;
}

/// Exact singular values of the top-split scaled block (oracle).
inline Vector top_split_sigma(const Matrix& a) {
    return decay_curves(a).sigma;
}

/// Predicted one-level enhanced-scheme spectrum: {1 - sigma_i^2 : i > r}
/// together with 1 at multiplicity N - (k - r).  Descending order.
inline Vector esif_expected_spectrum(const Vector& sigma_full, idx r, idx n) {
    const idx k = sigma_full.size();
    const idx r_eff = std::min(r, k);
    Vector v;
    v.reserve(n);
    for (idx i = 0; i < n - (k - r_eff); ++i) v.push_back(1.0);
    for (idx i = r_eff; i < k; ++i)
        v.push_back((1.0 - sigma_full[i]) * (1.0 + sigma_full[i]));
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

/// Predicted one-level baseline-scheme spectrum: {1 +- sigma_i : i > r}
/// together with 1 at multiplicity N - 2(k - r).  Descending order.
inline Vector sif_expected_spectrum(const Vector& sigma_full, idx r, idx n) {
    const idx k = sigma_full.size();
    const idx r_eff = std::min(r, k);
    Vector v;
    v.reserve(n);
    for (idx i = 0; i < n - 2 * (k - r_eff); ++i) v.push_back(1.0);
    for (idx i = r_eff; i < k; ++i) {
        v.push_back(1.0 + sigma_full[i]);
        v.push_back(1.0 - sigma_full[i]);
    }
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

inline double max_sorted_deviation(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (idx i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Condition-number formulas induced by the first discarded singular value.
inline double kappa_esif_formula(double s) {
    return 1.0 / ((1.0 - s) * (1.0 + s));
}
inline double kappa_sif_formula(double s) { return (1.0 + s) / (1.0 - s); }

/// One uniform verdict row shared by the CLI verify command and tests.
struct Check {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double bound = 0.0;
    std::string detail;
};

/// Theorem: the one-level enhanced spectrum matches {1 - sigma_i^2} plus a
/// bank of exact ones.  Returns the max absolute eigenvalue deviation.
inline double one_level_spectrum_deviation(const Matrix& a, idx r) {
    const PartitionPlan plan = PartitionPlan::bisect(a.rows(), 1);
    FactorOptions opt;
    opt.rank = r;
    opt.compression = CompressionKind::explicit_svd;
    const EsifFactor f = EsifFactor::build(a, plan, opt);
    SpectrumOptions so;
    so.kappa_a = false;
    const SpectrumReport rep = spectrum(a, f, so);
    const Vector expected = esif_expected_spectrum(top_split_sigma(a), r, a.rows());
    return max_sorted_deviation(rep.eigenvalues, expected);
}

/// Theorem: one-level error is PSD with relative norm at most sigma_{r+1}^2.
struct OneLevelErrorCheck {
    double min_eig_scaled = 0.0; ///< min eig(E) / ||A||
    double rel_err = 0.0;
    double bound = 0.0; ///< sigma_{r+1}^2
};

inline OneLevelErrorCheck one_level_error_check(const Matrix& a, idx r) {
    const PartitionPlan plan = PartitionPlan::bisect(a.rows(), 1);
    FactorOptions opt;
    opt.rank = r;
    opt.compression = CompressionKind::explicit_svd;
    const EsifFactor f = EsifFactor::build(a, plan, opt);
    const PsdReport psd = psd_check(a, f);
    const Vector sigma = top_split_sigma(a);
    OneLevelErrorCheck chk;
    chk.min_eig_scaled = psd.min_eig / psd.norm_a;
    chk.rel_err = psd.rel_err;
    const idx k = sigma.size();
    const idx r_eff = std::min(r, k);
    chk.bound = (r_eff < k) ? sigma[r_eff] * sigma[r_eff] : 0.0;
    return chk;
}

/// Theorem: multilevel eigenvalues lie in [1/(1+eps), 1] with
/// eps = [(1+tau^2)^l - 1] kappa(A), tau taken a posteriori from the build.
struct MultilevelBoundsCheck {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double kappa_prec = 0.0;
    double epsilon = 0.0;
    double lower_bound = 0.0; ///< 1/(1+eps)
    bool pass = false;
};

inline MultilevelBoundsCheck multilevel_bounds_check(const Matrix& a, int levels,
                                                     idx r, double eig_tol = 1e-9) {
    const PartitionPlan plan = PartitionPlan::bisect(a.rows(), levels);
    FactorOptions opt;
    opt.rank = r;
    opt.compression = CompressionKind::explicit_svd;
    const EsifFactor f = EsifFactor::build(a, plan, opt);
    SpectrumOptions so;
    so.kappa_a = true;
    so.tau = f.tau();
    so.levels = levels;
    const SpectrumReport rep = spectrum(a, f, so);
    MultilevelBoundsCheck chk;
    chk.lambda_min = rep.eigenvalues.back();
    chk.lambda_max = rep.eigenvalues.front();
    chk.kappa_prec = rep.kappa_prec;
    chk.epsilon = rep.epsilon;
    chk.lower_bound = 1.0 / (1.0 + rep.epsilon);
    // The kappa arm inherits exactly the grace the eigenvalue box grants:
    // lambda_max <= 1 + tol and lambda_min >= 1/(1+eps) - tol imply
    // kappa <= (1 + tol) / (1/(1+eps) - tol).  Without it the arm is
    // unsatisfiable at tau = 0, where eps = 0 leaves no room for the
    // eigensolver's own rounding.
    const double kappa_grace = (1.0 + eig_tol) / (chk.lower_bound - eig_tol);
    chk.pass = chk.lambda_min >= chk.lower_bound - eig_tol &&
               chk.lambda_max <= 1.0 + eig_tol &&
               chk.kappa_prec <= kappa_grace;
    return chk;
}

/// Condition-number formula check for both schemes on one matrix.
struct FormulaCheck {
    double sigma_next = 0.0;
    double kappa_esif_measured = 0.0;
    double kappa_esif_formula_v = 0.0;
    double kappa_sif_measured = 0.0;
    double kappa_sif_formula_v = 0.0;
    double esif_rel_dev = 0.0;
    double sif_rel_dev = 0.0;
};

inline FormulaCheck formula_check(const Matrix& a, idx r) {
    const PartitionPlan plan = PartitionPlan::bisect(a.rows(), 1);
    FactorOptions opt;
    opt.rank = r;
    opt.compression = CompressionKind::explicit_svd;
    opt.sif_sigma_cap = kSigmaClamp; // formulas describe the plain scheme
    const EsifFactor fe = EsifFactor::build(a, plan, opt);
    const SifFactor fs = SifFactor::build(a, plan, opt);
    SpectrumOptions so;
    so.kappa_a = false;
    const SpectrumReport re = spectrum(a, fe, so);
    const SpectrumReport rs = spectrum(a, fs, so);
    const Vector sigma = top_split_sigma(a);
    FormulaCheck chk;
    const idx k = sigma.size();
    const idx r_eff = std::min(r, k);
    chk.sigma_next = (r_eff < k) ? sigma[r_eff] : 0.0;
    chk.kappa_esif_measured = re.kappa_prec;
    chk.kappa_sif_measured = rs.kappa_prec;
    chk.kappa_esif_formula_v = kappa_esif_formula(chk.sigma_next);
    chk.kappa_sif_formula_v = kappa_sif_formula(chk.sigma_next);
    chk.esif_rel_dev = std::abs(chk.kappa_esif_measured - chk.kappa_esif_formula_v) /
                       chk.kappa_esif_formula_v;
    chk.sif_rel_dev = std::abs(chk.kappa_sif_measured - chk.kappa_sif_formula_v) /
                      chk.kappa_sif_formula_v;
    return chk;
}

} // namespace esif::verify
