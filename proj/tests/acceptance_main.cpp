// Acceptance gate for the library: eleven criteria, one verdict line each.
//
// Every criterion pins its tolerances in code next to the check.  The binary
// prints PASS/FAIL per criterion plus a summary, and exits non-zero if any
// criterion fails.  Expected total runtime is minutes-scale: several checks
// densify preconditioned operators at N in the thousands on purpose.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "esif/esif.hpp"

using namespace esif;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

/// 50 seeded random SPD matrices cycling through four sizes.
std::vector<Matrix> corpus50() {
    std::vector<Matrix> out;
    out.reserve(50);
    const idx sizes[4] = {16, 24, 32, 48};
    for (int i = 0; i < 50; ++i)
        out.push_back(verify::random_spd(sizes[i % 4], 100 + i));
    return out;
}

BenchRow cell(const ProblemSpec& p, const Matrix& a, PrecondKind precond,
              idx rank, int levels, std::uint64_t seed, DiagLevel diag,
              idx max_iter = 5000,
              CompressionKind comp = CompressionKind::randomized) {
    BenchConfig cfg;
    cfg.problem = p;
    cfg.precond = precond;
    cfg.rank = rank;
    cfg.levels = levels;
    cfg.leaf_size = 5;
    cfg.seed = seed;
    cfg.max_iter = max_iter;
    cfg.diagnostics = diag;
    cfg.compression = comp;
    return run_bench(cfg, a);
}

ProblemSpec rbf_spec(RbfKind kind, double eps, idx n) {
    ProblemSpec p;
    p.kind = ProblemKind::rbf;
    p.rbf = kind;
    p.eps = eps;
    p.n = n;
    return p;
}

ProblemSpec example1_spec(idx n) {
    ProblemSpec p;
    p.kind = ProblemKind::example1;
    p.n = n;
    return p;
}

ProblemSpec gauss3d_spec(idx n) {
    ProblemSpec p;
    p.kind = ProblemKind::gaussian_kernel;
    p.n = n;
    return p;
}

// ---------------------------------------------------------------------------
// 1. One-level spectrum identity: eigenvalues of the preconditioned operator
//    equal {1 - sigma_i^2 : i > r} plus exact ones.  Tolerance 1e-9.
// ---------------------------------------------------------------------------
Outcome crit1_one_level_spectrum() {
    double worst = 0.0;
    for (const Matrix& a : corpus50())
        for (idx r : {idx{1}, idx{2}, idx{4}})
            worst = std::max(worst, verify::one_level_spectrum_deviation(a, r));
    return {worst <= 1e-9, fmt("max eigenvalue deviation %.3g (tol 1e-9)", worst)};
}

// ---------------------------------------------------------------------------
// 2. One-level error: E = Atilde - A is PSD up to 1e-10*||A|| and
//    ||E||/||A|| <= sigma_{r+1}^2 + 1e-10 on the same corpus.
// ---------------------------------------------------------------------------
Outcome crit2_one_level_error() {
    double worst_eig = 0.0;   // most negative scaled eigenvalue seen
    double worst_excess = -1.0; // rel_err minus bound
    for (const Matrix& a : corpus50())
        for (idx r : {idx{1}, idx{2}, idx{4}}) {
            const auto chk = verify::one_level_error_check(a, r);
            worst_eig = std::min(worst_eig, chk.min_eig_scaled);
            worst_excess = std::max(worst_excess, chk.rel_err - chk.bound);
        }
    const bool pass = worst_eig >= -1e-10 && worst_excess <= 1e-10;
    return {pass, fmt("min scaled eig %.3g (tol -1e-10), max rel-err excess %.3g "
                      "(tol 1e-10)",
                      worst_eig, worst_excess)};
}

// ---------------------------------------------------------------------------
// 3. Robust existence: randomized builds over every generator at N = 1280
//    never clamp, and reconstructed factorizations are SPD at N = 512.
//    An optional Matrix Market input is exercised when present.
// ---------------------------------------------------------------------------
Outcome crit3_existence() {
    struct Instance {
        ProblemSpec p;
        idx rank;
    };
    std::vector<Instance> big = {
        {example1_spec(1280), 5},
        {rbf_spec(RbfKind::gaussian, 0.4, 1280), 6},
        {rbf_spec(RbfKind::gaussian, 0.36, 1280), 6},
        {rbf_spec(RbfKind::gaussian, 0.32, 1280), 6},
        {rbf_spec(RbfKind::sech, 0.3, 1280), 6},
        {rbf_spec(RbfKind::sech, 0.25, 1280), 6},
        {rbf_spec(RbfKind::sech, 0.2, 1280), 6},
        {rbf_spec(RbfKind::inverse_multiquadric, 0.3, 1280), 6},
        {rbf_spec(RbfKind::inverse_multiquadric, 0.25, 1280), 6},
        {rbf_spec(RbfKind::inverse_multiquadric, 0.2, 1280), 6},
        {rbf_spec(RbfKind::inverse_quadratic, 0.25, 1280), 6},
        {rbf_spec(RbfKind::inverse_quadratic, 0.2, 1280), 6},
        {rbf_spec(RbfKind::inverse_quadratic, 1.0 / 6.0, 1280), 6},
        {gauss3d_spec(1280), 8},
    };
    idx clamps = 0;
    for (const Instance& inst : big) {
        const Matrix a = generate(inst.p);
        const PartitionPlan plan = PartitionPlan::bisect(a.rows(), levels_for(a.rows(), 5));
        FactorOptions opt;
        opt.rank = inst.rank;
        opt.seed = 7;
        const EsifFactor f = EsifFactor::build(a, plan, opt);
        clamps += f.clamp_count();
    }

    std::vector<Instance> small = {
        {example1_spec(512), 5},
        {rbf_spec(RbfKind::gaussian, 0.32, 512), 6},
        {rbf_spec(RbfKind::sech, 0.2, 512), 6},
        {rbf_spec(RbfKind::inverse_quadratic, 1.0 / 6.0, 512), 6},
        {gauss3d_spec(512), 8},
    };
    double min_eig = std::numeric_limits<double>::infinity();
    for (const Instance& inst : small) {
        const Matrix a = generate(inst.p);
        const PartitionPlan plan = PartitionPlan::bisect(a.rows(), levels_for(a.rows(), 5));
        FactorOptions opt;
        opt.rank = inst.rank;
        opt.seed = 7;
        const EsifFactor f = EsifFactor::build(a, plan, opt);
        clamps += f.clamp_count();
        const Matrix at = f.reconstruct();
        min_eig = std::min(min_eig, sym_eig(at, false).values.front());
    }

    std::string mm_note = "optional mm input absent, skipped";
    const char* env = std::getenv("ESIF_MHD_PATH");
    for (const std::string path :
         {env ? std::string(env) : std::string(), std::string("data/MHD3200B.mtx"),
          std::string("../data/MHD3200B.mtx")}) {
        if (path.empty()) continue;
        std::ifstream probe(path);
        if (!probe) continue;
        const Matrix a = read_matrix_market(path);
        const PartitionPlan plan = PartitionPlan::bisect(a.rows(), levels_for(a.rows(), 5));
        FactorOptions opt;
        opt.rank = 6;
        opt.seed = 7;
        const EsifFactor f = EsifFactor::build(a, plan, opt);
        clamps += f.clamp_count();
        mm_note = fmt("mm input '%s' built with %zu clamps",
                      path.c_str(), static_cast<std::size_t>(f.clamp_count()));
        break;
    }

    const bool pass = clamps == 0 && min_eig > 0.0;
    return {pass, fmt("clamp events %zu (need 0), min reconstructed eig %.3g "
                      "(need > 0); %s",
                      static_cast<std::size_t>(clamps), min_eig, mm_note.c_str())};
}

// ---------------------------------------------------------------------------
// 4. Multilevel bounds: preconditioned eigenvalues in [1/(1+eps)-1e-9, 1+1e-9]
//    and kappa <= 1+eps with eps from the a-posteriori tau.
// ---------------------------------------------------------------------------
Outcome crit4_multilevel_bounds() {
    struct Instance {
        ProblemSpec p;
        idx rank;
    };
    // Instance choice: the exact-arithmetic bound lambda_max <= 1 is only
    // resolvable at the pinned 1e-9 tolerance when rounding in the build,
    // which scales like n*eps*kappa(A), stays below it -- so the instances
    // here keep kappa(A) <= ~1e7.  The harder generator matrices are covered
    // by the SPD-reconstruction arm of criterion 3 and the solve bands of
    // criteria 5-7, which do not require eigenvalue-resolution accuracy.
    const std::vector<Instance> set = {
        {example1_spec(320), 5},
        {rbf_spec(RbfKind::sech, 0.3, 256), 6},
        {rbf_spec(RbfKind::inverse_quadratic, 1.0 / 6.0, 320), 6},
        {rbf_spec(RbfKind::gaussian, 0.36, 256), 6},
        {rbf_spec(RbfKind::inverse_multiquadric, 0.25, 256), 6},
    };
    std::size_t in_box = 0;
    double worst_excess = 0.0; // lambda_max - (1 + 1e-9), positive is bad
    for (const Instance& inst : set) {
        const Matrix a = generate(inst.p);
        const int levels = levels_for(a.rows(), 5);
        const auto chk = verify::multilevel_bounds_check(a, levels, inst.rank, 1e-9);
        if (chk.pass) ++in_box;
        worst_excess = std::max(worst_excess, chk.lambda_max - (1.0 + 1e-9));
    }
    return {in_box == set.size(),
            fmt("%zu/%zu instances inside the eigenvalue box (eig tol 1e-9), "
                "worst lambda_max excess %.3g (need <= 0)",
                in_box, set.size(), worst_excess)};
}

// ---------------------------------------------------------------------------
// 5. Scaling study bands at N = 1280 and 2560, rank 5, leaf 5:
//    enhanced kappa <= 1.1 and iters <= 6; baseline iters in [40, 90];
//    block-diagonal iters within 15% of {570, 562}.  Seeds 7, 8, 9.
// ---------------------------------------------------------------------------
Outcome crit5_scaling_bands() {
    const idx sizes[2] = {1280, 2560};
    const double bdiag_center[2] = {570.0, 562.0};
    std::string notes;
    bool pass = true;

    for (int t = 0; t < 2; ++t) {
        const idx n = sizes[t];
        const ProblemSpec p = example1_spec(n);
        const Matrix a = generate(p);

        const BenchRow bd = cell(p, a, PrecondKind::bdiag, 5, -1, 7, DiagLevel::none);
        const double dev = std::abs(static_cast<double>(bd.iterations) - bdiag_center[t]) /
                           bdiag_center[t];
        if (dev > 0.15 || !bd.converged) pass = false;
        notes += fmt("n=%zu bdiag %zu; ", static_cast<std::size_t>(n),
                     static_cast<std::size_t>(bd.iterations));

        for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
            const BenchRow es = cell(p, a, PrecondKind::esif, 5, -1, seed, DiagLevel::prec);
            const BenchRow si = cell(p, a, PrecondKind::sif, 5, -1, seed, DiagLevel::none);
            if (!(es.kappa_prec <= 1.1) || es.iterations > 6 || !es.converged) pass = false;
            if (si.iterations < 40 || si.iterations > 90 || !si.converged) pass = false;
            if (seed == 7)
                notes += fmt("esif %zu it kappa %.3f, sif %zu it; ",
                             static_cast<std::size_t>(es.iterations), es.kappa_prec,
                             static_cast<std::size_t>(si.iterations));
        }
    }
    return {pass, notes + "(esif kappa<=1.1 it<=6, sif 40..90, bdiag +-15%)"};
}

// ---------------------------------------------------------------------------
// 6. Kernel study at rank 6, N = 1280, 8 levels: at least 6 of 12 cells match
//    the reference iteration counts (enhanced +-2, baseline +-30%), and the
//    two hardest pinned cells must be among the matches.
// ---------------------------------------------------------------------------
Outcome crit6_kernel_cells() {
    struct Cell {
        RbfKind kind;
        double eps;
        idx sif_ref;
        idx esif_ref;
        bool mandatory;
    };
    const std::vector<Cell> cells = {
        {RbfKind::gaussian, 0.4, 15, 1, false},
        {RbfKind::gaussian, 0.36, 107, 1, false},
        {RbfKind::gaussian, 0.32, 549, 2, false},
        {RbfKind::sech, 0.3, 9, 1, false},
        {RbfKind::sech, 0.25, 52, 1, false},
        {RbfKind::sech, 0.2, 282, 3, true},
        {RbfKind::inverse_multiquadric, 0.3, 13, 3, false},
        {RbfKind::inverse_multiquadric, 0.25, 27, 3, false},
        {RbfKind::inverse_multiquadric, 0.2, 86, 6, false},
        {RbfKind::inverse_quadratic, 0.25, 14, 2, false},
        {RbfKind::inverse_quadratic, 0.2, 43, 3, false},
        {RbfKind::inverse_quadratic, 1.0 / 6.0, 104, 5, true},
    };
    int matched = 0;
    bool mandatory_ok = true;
    std::string notes;
    for (const Cell& c : cells) {
        const ProblemSpec p = rbf_spec(c.kind, c.eps, 1280);
        const Matrix a = generate(p);
        const BenchRow es = cell(p, a, PrecondKind::esif, 6, 8, 7, DiagLevel::none);
        const BenchRow si = cell(p, a, PrecondKind::sif, 6, 8, 7, DiagLevel::none);
        const bool esif_ok =
            std::llabs(static_cast<long long>(es.iterations) -
                       static_cast<long long>(c.esif_ref)) <= 2 &&
            es.converged;
        const bool sif_ok =
            std::abs(static_cast<double>(si.iterations) -
                     static_cast<double>(c.sif_ref)) <=
                0.30 * static_cast<double>(c.sif_ref) &&
            si.converged;
        const bool in_band = esif_ok && sif_ok;
        if (in_band) ++matched;
        if (c.mandatory) {
            mandatory_ok = mandatory_ok && in_band;
            notes += fmt("%s eps=%.4g esif %zu/%zu sif %zu/%zu; ", rbf_name(c.kind),
                         c.eps, static_cast<std::size_t>(es.iterations),
                         static_cast<std::size_t>(c.esif_ref),
                         static_cast<std::size_t>(si.iterations),
                         static_cast<std::size_t>(c.sif_ref));
        }
    }
    const bool pass = matched >= 6 && mandatory_ok;
    return {pass, fmt("%d/12 cells in band (need >= 6, enhanced +-2, baseline "
                      "+-30%%); pinned cells: %s",
                      matched, notes.c_str())};
}

// ---------------------------------------------------------------------------
// 7. Rank-4 robustness at N = 1280: enhanced iterations <= 20 on every cell
//    while the baseline exceeds 70 iterations on at least 4 cells.  Seeds
//    7, 8, 9 must each satisfy both statements.
// ---------------------------------------------------------------------------
Outcome crit7_rank4() {
    const std::vector<std::pair<RbfKind, double>> grid = {
        {RbfKind::gaussian, 0.3},
        {RbfKind::gaussian, 0.25},
        {RbfKind::gaussian, 0.2},
        {RbfKind::sech, 0.25},
        {RbfKind::sech, 0.2},
        {RbfKind::sech, 1.0 / 6.0},
        {RbfKind::inverse_multiquadric, 0.3},
        {RbfKind::inverse_multiquadric, 0.25},
        {RbfKind::inverse_multiquadric, 0.2},
        {RbfKind::inverse_quadratic, 0.25},
        {RbfKind::inverse_quadratic, 0.2},
        {RbfKind::inverse_quadratic, 1.0 / 6.0},
    };
    bool pass = true;
    std::string notes;
    std::string offenders;
    for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
        idx esif_max = 0;
        int sif_hard = 0;
        for (const auto& [kind, eps] : grid) {
            const ProblemSpec p = rbf_spec(kind, eps, 1280);
            const Matrix a = generate(p);
            const BenchRow es = cell(p, a, PrecondKind::esif, 4, 8, seed, DiagLevel::none);
            // cap the baseline at 100 iterations: only ">70" matters here
            const BenchRow si = cell(p, a, PrecondKind::sif, 4, 8, seed,
                                     DiagLevel::none, 100);
            if (!es.converged || es.iterations > 20) {
                pass = false;
                if (seed == 7)
                    offenders += fmt("%s eps=%.4g %zu it; ", rbf_name(kind), eps,
                                     static_cast<std::size_t>(es.iterations));
            }
            esif_max = std::max(esif_max, es.iterations);
            if (si.iterations > 70) ++sif_hard;
        }
        if (sif_hard < 4) pass = false;
        notes += fmt("seed %llu: esif max %zu, baseline >70 on %d; ",
                     static_cast<unsigned long long>(seed),
                     static_cast<std::size_t>(esif_max), sif_hard);
    }
    if (!offenders.empty()) notes += "enhanced over 20 it: " + offenders;
    return {pass, notes + "(need esif <= 20 everywhere, >=4 hard baseline cells)"};
}

// ---------------------------------------------------------------------------
// 8. Condition-number formulas agree with measured spectra to 1e-6 relative.
// ---------------------------------------------------------------------------
Outcome crit8_formulas() {
    std::vector<Matrix> set;
    set.push_back(verify::random_spd(24, 201));
    set.push_back(verify::random_spd(32, 202));
    set.push_back(verify::random_spd(48, 203));
    set.push_back(gen_example1(64));
    double worst = 0.0;
    for (const Matrix& a : set) {
        const auto chk = verify::formula_check(a, 3);
        worst = std::max({worst, chk.esif_rel_dev, chk.sif_rel_dev});
    }
    return {worst <= 1e-6, fmt("max relative deviation %.3g (tol 1e-6)", worst)};
}

// ---------------------------------------------------------------------------
// 9. Cost model: measured apply cost xi quadruples (within [3.2, 4.8]) from
//    N = 4096 to 8192, lands in [0.8, 1.6] x 2N^2, and storage scales like
//    r N log2 N within 30% of the mean ratio across four sizes.
// ---------------------------------------------------------------------------
Outcome crit9_cost_model() {
    const auto profile_at = [](idx n) {
        const Matrix a = gen_example1(n);
        const PartitionPlan plan = PartitionPlan::bisect(n, levels_for(n, 5));
        FactorOptions opt;
        opt.rank = 5;
        opt.seed = 7;
        const EsifFactor f = EsifFactor::build(a, plan, opt);
        return cost_profile(f);
    };

    const CostProfile p4096 = profile_at(4096);
    const CostProfile p8192 = profile_at(8192);
    const double growth = static_cast<double>(p8192.xi_s) /
                          static_cast<double>(p4096.xi_s);
    const double ratio = p8192.ratio_2n2;

    std::vector<double> storage_ratio;
    for (idx n : {idx{1280}, idx{2560}, idx{5120}, idx{10240}}) {
        const CostProfile prof = profile_at(n);
        storage_ratio.push_back(static_cast<double>(prof.storage_total) /
                                (5.0 * static_cast<double>(n) *
                                 std::log2(static_cast<double>(n))));
    }
    double mean = 0.0;
    for (double v : storage_ratio) mean += v;
    mean /= static_cast<double>(storage_ratio.size());
    double worst_rel = 0.0;
    for (double v : storage_ratio)
        worst_rel = std::max(worst_rel, std::abs(v - mean) / mean);

    const bool pass = growth >= 3.2 && growth <= 4.8 && ratio >= 0.8 &&
                      ratio <= 1.6 && worst_rel <= 0.30;
    return {pass, fmt("xi growth %.3f (band 3.2..4.8), xi/2N^2 %.3f (band "
                      "0.8..1.6), storage/(r N log2 N) spread %.1f%% (tol 30%%)",
                      growth, ratio, 100.0 * worst_rel)};
}

// ---------------------------------------------------------------------------
// 10. Randomized sketching matches the explicit decomposition: identical
//     singular values at full rank (tol 1e-8, N <= 256) and iteration counts
//     within 2 on the model problem at N = 1280.
// ---------------------------------------------------------------------------
Outcome crit10_randomized_vs_explicit() {
    double worst_sigma = 0.0;
    struct Inst {
        Matrix a;
        idx rank;
    };
    std::vector<Inst> set;
    set.push_back({verify::random_spd(32, 301), 16});
    set.push_back({verify::random_spd(64, 302), 32});
    set.push_back({gen_example1(128), 64});
    set.push_back({verify::random_spd(256, 303), 128});
    for (const Inst& inst : set) {
        const PartitionPlan plan = PartitionPlan::bisect(inst.a.rows(), 1);
        FactorOptions opt;
        opt.rank = inst.rank;
        opt.seed = 7;
        opt.compression = CompressionKind::randomized;
        const EsifFactor fr = EsifFactor::build(inst.a, plan, opt);
        opt.compression = CompressionKind::explicit_svd;
        const EsifFactor fx = EsifFactor::build(inst.a, plan, opt);
        const Vector& sr = fr.node_sigma(0);
        const Vector& sx = fx.node_sigma(0);
        worst_sigma =
            std::max(worst_sigma, verify::max_sorted_deviation(sr, sx));
    }

    const ProblemSpec p = example1_spec(1280);
    const Matrix a = generate(p);
    const BenchRow rnd = cell(p, a, PrecondKind::esif, 5, 8, 7, DiagLevel::none);
    const BenchRow exp = cell(p, a, PrecondKind::esif, 5, 8, 7, DiagLevel::none,
                              5000, CompressionKind::explicit_svd);
    const long long diter = std::llabs(static_cast<long long>(rnd.iterations) -
                                       static_cast<long long>(exp.iterations));
    const bool pass = worst_sigma <= 1e-8 && diter <= 2 && rnd.converged &&
                      exp.converged;
    return {pass, fmt("full-rank sigma deviation %.3g (tol 1e-8), iteration "
                      "delta %lld (tol 2)",
                      worst_sigma, diter)};
}

// ---------------------------------------------------------------------------
// 11. Determinism: rerunning a table writes bitwise-identical CSV, JSON, and
//     history files.
// ---------------------------------------------------------------------------
Outcome crit11_determinism() {
    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::vector<BenchConfig> cells;
    {
        BenchConfig c;
        c.problem = example1_spec(128);
        c.precond = PrecondKind::esif;
        c.rank = 4;
        cells.push_back(c);
        c.problem = rbf_spec(RbfKind::sech, 0.3, 96);
        c.precond = PrecondKind::sif;
        cells.push_back(c);
        c.problem = example1_spec(64);
        c.precond = PrecondKind::none;
        cells.push_back(c);
    }
    const std::string tags[2] = {"esif_acc_run1", "esif_acc_run2"};
    std::string payload[2];
    for (int t = 0; t < 2; ++t) {
        const std::vector<BenchRow> rows = run_table(cells);
        write_csv(tags[t] + ".csv", rows, false);
        write_json(tags[t] + ".json", rows, false);
        write_history_csv(tags[t] + ".hist.csv", rows);
        payload[t] = slurp(tags[t] + ".csv") + slurp(tags[t] + ".json") +
                     slurp(tags[t] + ".hist.csv");
    }
    const bool nonempty = payload[0].size() > 100;
    const bool pass = nonempty && payload[0] == payload[1];
    for (int t = 0; t < 2; ++t)
        for (const char* ext : {".csv", ".json", ".hist.csv"})
            std::remove((tags[t] + ext).c_str());
    return {pass, fmt("%zu serialized bytes, rerun %s", payload[0].size(),
                      pass ? "bitwise identical" : "DIFFERS")};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"one-level spectrum identity", crit1_one_level_spectrum},
        {"one-level PSD error bound", crit2_one_level_error},
        {"unconditional existence", crit3_existence},
        {"multilevel eigenvalue bounds", crit4_multilevel_bounds},
        {"scaling study bands", crit5_scaling_bands},
        {"kernel study bands", crit6_kernel_cells},
        {"rank-4 robustness", crit7_rank4},
        {"condition-number formulas", crit8_formulas},
        {"cost model", crit9_cost_model},
        {"randomized vs explicit", crit10_randomized_vs_explicit},
        {"deterministic outputs", crit11_determinism},
    };

    int failures = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, fmt("exception: %s", e.what())};
        }
        if (!out.pass) ++failures;
        std::printf("[%2d] %s  %-30s %s (%.1fs)\n", index,
                    out.pass ? "PASS" : "FAIL", c.name, out.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("ACCEPTANCE SUMMARY: %d/11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
