#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "esif/diagnostics.hpp"
#include "esif/esif_factor.hpp"
#include "esif/pcg.hpp"
#include "esif/problems.hpp"
#include "esif/verify.hpp"

using namespace esif;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FactorOptions explicit_opts(idx rank, std::uint64_t seed = 7) {
    FactorOptions opt;
    opt.rank = rank;
    opt.seed = seed;
    opt.compression = CompressionKind::explicit_svd;
    return opt;
}

/// [[I, C], [C^T, I]] with C = diag(c0, c1): the scaled top-split block is
/// exactly C, so its singular values are known in closed form.
Matrix planted_two_block(double c0, double c1) {
    Matrix a = Matrix::identity(4);
    a(0, 2) = c0;
    a(2, 0) = c0;
    a(1, 3) = c1;
    a(3, 1) = c1;
    return a;
}

} // namespace

TEST_CASE("spectrum of an exactly factored matrix is flat", "[diagnostics]") {
    const Matrix a = verify::random_spd(24, 5);
    const PartitionPlan plan = PartitionPlan::bisect(24, 2);
    const EsifFactor f = EsifFactor::build(a, plan, explicit_opts(12));
    SpectrumOptions so;
    so.kappa_a = false;
    const SpectrumReport rep = spectrum(a, f, so);
    REQUIRE(rep.eigenvalues.size() == 24);
    REQUIRE(rep.multiplicity_one == 24);
    REQUIRE_THAT(rep.kappa_prec, WithinAbs(1.0, 1e-9));
    REQUIRE(rep.lambda_max >= rep.lambda_min);
    REQUIRE(std::isnan(rep.kappa_a));
    REQUIRE(std::isnan(rep.epsilon));
}

TEST_CASE("spectrum under the identity preconditioner reproduces kappa(A)",
          "[diagnostics]") {
    Matrix a(8, 8);
    for (idx i = 0; i < 8; ++i) a(i, i) = static_cast<double>(i + 1);
    const IdentityPrecond id{8};
    SpectrumOptions so;
    so.kappa_a = true;
    so.tau = 0.1;
    so.levels = 2;
    const SpectrumReport rep = spectrum(a, id, so);
    REQUIRE_THAT(rep.kappa_prec, WithinRel(8.0, 1e-12));
    REQUIRE_THAT(rep.kappa_a, WithinRel(8.0, 1e-12));
    REQUIRE_THAT(rep.eigenvalues.front(), WithinRel(8.0, 1e-12));
    REQUIRE_THAT(rep.eigenvalues.back(), WithinRel(1.0, 1e-12));
    // epsilon = [(1 + tau^2)^levels - 1] * kappa(A) = 0.0201 * 8
    REQUIRE_THAT(rep.epsilon, WithinRel(0.1608, 1e-12));
    REQUIRE(rep.multiplicity_one == 1);
}

TEST_CASE("spectrum refuses to densify above the cap", "[diagnostics]") {
    const Matrix a = verify::random_spd(16, 3);
    const PartitionPlan plan = PartitionPlan::bisect(16, 1);
    const EsifFactor f = EsifFactor::build(a, plan, explicit_opts(2));
    SpectrumOptions so;
    so.cap = 8;
    REQUIRE_THROWS_AS(spectrum(a, f, so), SizeCapExceeded);
}

TEST_CASE("psd_check flags the exact factorization as error-free",
          "[diagnostics]") {
    const Matrix a = verify::random_spd(20, 11);
    const PartitionPlan plan = PartitionPlan::bisect(20, 1);
    const EsifFactor f = EsifFactor::build(a, plan, explicit_opts(10));
    const PsdReport rep = psd_check(a, f);
    REQUIRE(rep.is_psd);
    REQUIRE(rep.rel_err <= 1e-12);
    REQUIRE(rep.norm_a > 0.0);
}

TEST_CASE("decay_curves recovers planted singular values and both curves",
          "[diagnostics]") {
    const Matrix a = planted_two_block(0.9, 0.5);
    const DecayReport rep = decay_curves(a);
    REQUIRE(rep.sigma.size() == 2);
    REQUIRE_THAT(rep.sigma[0], WithinAbs(0.9, 1e-12));
    REQUIRE_THAT(rep.sigma[1], WithinAbs(0.5, 1e-12));
    REQUIRE_THAT(rep.sif_curve[0], WithinRel(19.0, 1e-10));
    REQUIRE_THAT(rep.sif_curve[1], WithinRel(3.0, 1e-10));
    REQUIRE_THAT(rep.esif_curve[0], WithinRel(1.0 / 0.19, 1e-10));
    REQUIRE_THAT(rep.esif_curve[1], WithinRel(4.0 / 3.0, 1e-10));
}

TEST_CASE("the baseline-to-enhanced magnification is (1 + sigma)^2",
          "[diagnostics]") {
    for (double s : {0.1, 0.5, 0.9, 0.99, 0.9999}) {
        const double ks = verify::kappa_sif_formula(s);
        const double ke = verify::kappa_esif_formula(s);
        REQUIRE_THAT(ks / ke, WithinRel((1.0 + s) * (1.0 + s), 1e-12));
        REQUIRE(ks >= ke); // enhanced never worse in exact arithmetic
    }
}

TEST_CASE("expected-spectrum oracles have the right shape", "[verify]") {
    const Vector sigma{0.9, 0.5};

    const Vector e = verify::esif_expected_spectrum(sigma, 1, 4);
    REQUIRE(e.size() == 4);
    REQUIRE(e[0] == 1.0);
    REQUIRE(e[1] == 1.0);
    REQUIRE(e[2] == 1.0);
    REQUIRE_THAT(e[3], WithinAbs(0.75, 1e-15));

    const Vector s = verify::sif_expected_spectrum(sigma, 1, 4);
    REQUIRE(s.size() == 4);
    REQUIRE_THAT(s[0], WithinAbs(1.5, 1e-15));
    REQUIRE(s[1] == 1.0);
    REQUIRE(s[2] == 1.0);
    REQUIRE_THAT(s[3], WithinAbs(0.5, 1e-15));

    // r >= k means an exact factorization: all ones.
    const Vector full = verify::esif_expected_spectrum(sigma, 5, 4);
    for (double v : full) REQUIRE(v == 1.0);
}

TEST_CASE("random_spd is a usable SPD corpus generator", "[verify]") {
    const Matrix a = verify::random_spd(32, 17);
    REQUIRE_NOTHROW(cholesky(a));
    const Matrix b = verify::random_spd(32, 17);
    REQUIRE(max_abs_diff(a, b) == 0.0);
    REQUIRE(max_abs_diff(a, verify::random_spd(32, 18)) > 0.0);
}

TEST_CASE("one-level spectrum deviation is tiny on a random instance",
          "[verify]") {
    const Matrix a = verify::random_spd(24, 41);
    REQUIRE(verify::one_level_spectrum_deviation(a, 2) < 1e-9);
}

TEST_CASE("one-level error check observes the PSD bound", "[verify]") {
    const Matrix a = verify::random_spd(24, 42);
    const auto chk = verify::one_level_error_check(a, 3);
    REQUIRE(chk.min_eig_scaled >= -1e-10);
    REQUIRE(chk.rel_err <= chk.bound + 1e-10);
    REQUIRE(chk.bound > 0.0);
}

TEST_CASE("condition-number formulas agree with measured spectra", "[verify]") {
    const Matrix a = verify::random_spd(28, 43);
    const auto chk = verify::formula_check(a, 3);
    REQUIRE(chk.sigma_next > 0.0);
    REQUIRE(chk.sigma_next < 1.0);
    REQUIRE(chk.esif_rel_dev < 1e-6);
    REQUIRE(chk.sif_rel_dev < 1e-6);
}

TEST_CASE("multilevel bounds check passes on the model problem", "[verify]") {
    const Matrix a = gen_example1(96);
    const auto chk = verify::multilevel_bounds_check(a, 3, 5);
    REQUIRE(chk.pass);
    REQUIRE(chk.lambda_max <= 1.0 + 1e-9);
    REQUIRE(chk.kappa_prec <= 1.0 + chk.epsilon);
    REQUIRE(chk.epsilon >= 0.0);
}

TEST_CASE("cost_profile measures one inverse application", "[diagnostics]") {
    const Matrix a = gen_example1(64);
    const PartitionPlan plan = PartitionPlan::bisect(64, 3);
    FactorOptions opt;
    opt.rank = 4;
    const EsifFactor f = EsifFactor::build(a, plan, opt);
    const CostProfile prof = cost_profile(f);
    REQUIRE(prof.n == 64);
    REQUIRE(prof.trials == 3);
    REQUIRE(prof.xi_s > 0);
    REQUIRE(prof.storage_total == f.storage_report().total);
    // one application of a structured inverse should cost a small multiple
    // of 2 N^2 at this size
    REQUIRE(prof.ratio_2n2 > 0.05);
    REQUIRE(prof.ratio_2n2 < 10.0);
}
