// bench: command-line harness for the esif preconditioning library.
//
//   bench --problem example1 --n 1280 --precond esif --rank 5 --levels 8
//   bench table --preset kernels --csv kernels.csv
//   bench verify --suite one-level-spectrum --suite cost-model
//
// Exit codes: 0 success, 1 verify-suite failure, 2 configuration error,
// 3 numerical error.  CSV/JSON outputs are bitwise reproducible for a fixed
// seed; wall-clock columns are only written with --timing.

#include <cinttypes>
#include <limits>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "esif/esif.hpp"

namespace {

using namespace esif;

ProblemSpec build_problem(const std::string& label, idx n, double eps, double s,
                          double mu, const std::vector<double>& box,
                          std::uint64_t cloud_seed, bool squared) {
    ProblemSpec p;
    p.n = n;
    p.eps = eps;
    p.s = s;
    p.mu = mu;
    p.cloud_seed = cloud_seed;
    p.squared_distance = squared;
    if (box.size() == 3) {
        p.box[0] = box[0];
        p.box[1] = box[1];
        p.box[2] = box[2];
    }
    if (label == "example1") {
        p.kind = ProblemKind::example1;
    } else if (label.rfind("rbf:", 0) == 0) {
        p.kind = ProblemKind::rbf;
        p.rbf = parse_rbf(label.substr(4));
    } else if (label == "gauss3d") {
        p.kind = ProblemKind::gaussian_kernel;
    } else if (label.rfind("mm:", 0) == 0) {
        p.kind = ProblemKind::matrix_market;
        p.path = label.substr(3);
        if (p.path.empty()) throw ConfigError("mm: problem needs a file path");
    } else {
        throw ConfigError("unknown problem '" + label +
                          "' (expected example1, rbf:<kernel>, gauss3d, mm:<path>)");
    }
    return p;
}

void print_row(const BenchRow& r) {
    std::printf("run_id      %s\n", r.run_id.c_str());
    std::printf("problem     %s  n=%zu  levels=%d  precond=%s\n",
                r.problem.c_str(), r.n, r.levels, r.precond.c_str());
    if (r.precond != "none") {
        std::printf("build       flops=%" PRIu64 "  storage=%zu doubles  tau=%.6g (%s)  clamp_events=%zu",
                    r.build_flops, r.storage, r.tau,
                    r.tau_exact ? "exact" : "sketch estimate", r.clamp_events);
        if (r.precond == "sif") std::printf("  stabilized=%zu", r.stabilized);
        std::printf("\n");
    }
    std::printf("solve       iterations=%zu  converged=%s  relres=%.6g\n",
                r.iterations, r.converged ? "yes" : "no", r.relres);
    std::printf("flops       solve=%" PRIu64 "  apply_per_pass=%" PRIu64
                "  telemetry=%" PRIu64 "\n",
                r.solve_flops, r.apply_flops, r.telemetry_flops);
    if (!std::isnan(r.kappa_prec))
        std::printf("spectrum    kappa_prec=%.6g  kappa_a=%.6g  epsilon=%.6g\n",
                    r.kappa_prec, r.kappa_a, r.epsilon);
    std::printf("time        build=%.2f ms  solve=%.2f ms\n", r.build_ms,
                r.solve_ms);
}

void write_outputs(const std::vector<BenchRow>& rows, const std::string& csv,
                   const std::string& json, const std::string& history,
                   bool timing) {
    if (!csv.empty()) write_csv(csv, rows, timing);
    if (!json.empty()) write_json(json, rows, timing);
    if (!history.empty()) write_history_csv(history, rows);
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

struct SuiteResult {
    bool pass = true;
};

bool suite_one_level_spectrum(std::uint64_t seed) {
    const idx sizes[] = {16, 24, 32, 48};
    double worst = 0.0;
    int checks = 0;
    for (int i = 0; i < 12; ++i) {
        const Matrix a = verify::random_spd(sizes[i % 4], seed + i);
        for (idx r : {idx{1}, idx{2}, idx{4}}) {
            worst = std::max(worst, verify::one_level_spectrum_deviation(a, r));
            ++checks;
        }
    }
    const bool pass = worst <= 1e-9;
    std::printf("[one-level-spectrum] %d checks  max |lambda - predicted| = %.3e"
                "  (bound 1e-9)  %s\n",
                checks, worst, pass ? "pass" : "FAIL");
    return pass;
}

bool suite_one_level_error(std::uint64_t seed) {
    const idx sizes[] = {16, 24, 32, 48};
    double worst_neg = 0.0;   // most negative scaled eigenvalue of E
    double worst_excess = 0.0; // rel_err minus its sigma_{r+1}^2 bound
    int checks = 0;
    for (int i = 0; i < 12; ++i) {
        const Matrix a = verify::random_spd(sizes[i % 4], seed + 100 + i);
        for (idx r : {idx{1}, idx{2}, idx{4}}) {
            const auto chk = verify::one_level_error_check(a, r);
            worst_neg = std::min(worst_neg, chk.min_eig_scaled);
            worst_excess = std::max(worst_excess, chk.rel_err - chk.bound);
            ++checks;
        }
    }
    const bool pass = worst_neg >= -1e-10 && worst_excess <= 1e-10;
    std::printf("[one-level-error] %d checks  min eig(E)/||A|| = %.3e (>= -1e-10)"
                "  max ||E||/||A|| excess over bound = %.3e (<= 1e-10)  %s\n",
                checks, worst_neg, worst_excess, pass ? "pass" : "FAIL");
    return pass;
}

bool suite_kappa_formulas(std::uint64_t seed) {
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
        const Matrix a = verify::random_spd(32, seed + 200 + i);
        const auto chk = verify::formula_check(a, 3);
        worst = std::max(worst, std::max(chk.esif_rel_dev, chk.sif_rel_dev));
    }
    const bool pass = worst <= 1e-6;
    std::printf("[kappa-formulas] 6 instances  max relative deviation of "
                "measured kappa from closed form = %.3e  (bound 1e-6)  %s\n",
                worst, pass ? "pass" : "FAIL");
    return pass;
}

bool suite_multilevel_spd(std::uint64_t seed) {
    struct Inst {
        const char* name;
        ProblemSpec spec;
        idx rank;
    };
    std::vector<Inst> corpus;
    {
        ProblemSpec p;
        p.kind = ProblemKind::example1;
        p.n = 320;
        corpus.push_back({"example1 n=320", p, 5});
    }
    {
        ProblemSpec p;
        p.kind = ProblemKind::rbf;
        p.rbf = RbfKind::gaussian;
        p.eps = 0.32;
        p.n = 512;
        corpus.push_back({"rbf:gaussian eps=0.32 n=512", p, 6});
    }
    {
        ProblemSpec p;
        p.kind = ProblemKind::rbf;
        p.rbf = RbfKind::sech;
        p.eps = 0.2;
        p.n = 320;
        corpus.push_back({"rbf:sech eps=0.2 n=320", p, 6});
    }
    {
        ProblemSpec p;
        p.kind = ProblemKind::rbf;
        p.rbf = RbfKind::inverse_quadratic;
        p.eps = 1.0 / 6.0;
        p.n = 320;
        corpus.push_back({"rbf:inverse_quadratic eps=1/6 n=320", p, 6});
    }
    {
        ProblemSpec p;
        p.kind = ProblemKind::gaussian_kernel;
        p.n = 320;
        corpus.push_back({"gauss3d n=320", p, 6});
    }
    bool pass = true;
    for (const Inst& inst : corpus) {
        const Matrix a = generate(inst.spec);
        const PartitionPlan plan =
            PartitionPlan::bisect(a.rows(), levels_for(a.rows(), 5));
        FactorOptions opt;
        opt.rank = inst.rank;
        opt.seed = seed;
        const EsifFactor f = EsifFactor::build(a, plan, opt);
        const Matrix at = f.reconstruct();
        const SymEig eig = sym_eig(at, false);
        const double min_eig = eig.values.front();
        const bool ok = f.clamp_count() == 0 && min_eig > 0.0;
        std::printf("[multilevel-spd] %-36s clamp_events=%zu  min eig(At)=%.3e"
                    "  %s\n",
                    inst.name, f.clamp_count(), min_eig, ok ? "pass" : "FAIL");
        pass = pass && ok;
    }
    return pass;
}

bool suite_multilevel_bounds(std::uint64_t /*seed*/) {
    bool pass = true;
    {
        ProblemSpec p;
        p.kind = ProblemKind::example1;
        p.n = 320;
        const Matrix a = generate(p);
        const auto chk = verify::multilevel_bounds_check(a, 6, 5);
        std::printf("[multilevel-bounds] example1 n=320 l=6  lambda in [%.6g, %.6g]"
                    "  kappa_prec=%.6g  bound 1+eps=%.6g  %s\n",
                    chk.lambda_min, chk.lambda_max, chk.kappa_prec,
                    1.0 + chk.epsilon, chk.pass ? "pass" : "FAIL");
        pass = pass && chk.pass;
    }
    {
        ProblemSpec p;
        p.kind = ProblemKind::rbf;
        p.rbf = RbfKind::sech;
        p.eps = 0.2;
        p.n = 256;
        const Matrix a = generate(p);
        const auto chk = verify::multilevel_bounds_check(a, 6, 6);
        std::printf("[multilevel-bounds] rbf:sech eps=0.2 n=256 l=6  lambda in "
                    "[%.6g, %.6g]  kappa_prec=%.6g  bound 1+eps=%.6g  %s\n",
                    chk.lambda_min, chk.lambda_max, chk.kappa_prec,
                    1.0 + chk.epsilon, chk.pass ? "pass" : "FAIL");
        pass = pass && chk.pass;
    }
    return pass;
}

bool suite_cost_model(std::uint64_t seed) {
    const auto profile_at = [&](idx n) {
        ProblemSpec p;
        p.kind = ProblemKind::example1;
        p.n = n;
        const Matrix a = generate(p);
        const PartitionPlan plan = PartitionPlan::bisect(n, levels_for(n, 5));
        FactorOptions opt;
        opt.rank = 5;
        opt.seed = seed;
        const EsifFactor f = EsifFactor::build(a, plan, opt);
        return cost_profile(f);
    };
    const CostProfile p4 = profile_at(4096);
    const CostProfile p8 = profile_at(8192);
    const double growth = p4.xi_s > 0 ? p8.xi_s / p4.xi_s : 0.0;
    const bool ok_growth = growth >= 3.2 && growth <= 4.8;
    const bool ok_ratio = p8.ratio_2n2 >= 0.8 && p8.ratio_2n2 <= 1.6;
    std::printf("[cost-model] xi_s(8192)/xi_s(4096) = %.3f (band [3.2, 4.8])  "
                "xi_s/2N^2 at 8192 = %.3f (band [0.8, 1.6])  %s\n",
                growth, p8.ratio_2n2,
                ok_growth && ok_ratio ? "pass" : "FAIL");
    return ok_growth && ok_ratio;
}

int cmd_verify(const std::vector<std::string>& suites, std::uint64_t seed) {
    static const std::vector<std::string> all = {
        "one-level-spectrum", "one-level-error",    "kappa-formulas",
        "multilevel-spd",     "multilevel-bounds",  "cost-model"};
    std::vector<std::string> todo;
    for (const std::string& s : suites) {
        if (s == "all") {
            todo = all;
            break;
        }
        if (std::find(all.begin(), all.end(), s) == all.end())
            throw ConfigError("unknown verify suite '" + s + "'");
        todo.push_back(s);
    }
    bool pass = true;
    for (const std::string& s : todo) {
        if (s == "one-level-spectrum") pass = suite_one_level_spectrum(seed) && pass;
        else if (s == "one-level-error") pass = suite_one_level_error(seed) && pass;
        else if (s == "kappa-formulas") pass = suite_kappa_formulas(seed) && pass;
        else if (s == "multilevel-spd") pass = suite_multilevel_spd(seed) && pass;
        else if (s == "multilevel-bounds") pass = suite_multilevel_bounds(seed) && pass;
        else if (s == "cost-model") pass = suite_cost_model(seed) && pass;
    }
    std::printf("verify: %s\n", pass ? "all suites passed" : "FAILURES detected");
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"esif bench: hierarchical incomplete-factorization "
                 "preconditioners for dense SPD systems"};
    app.require_subcommand(0, 1);

    std::string problem_label_s;
    idx n = 1280;
    double eps = 0.4, s_reg = 1e-9, mu = 2.5;
    std::vector<double> box;
    std::uint64_t cloud_seed = 1;
    bool squared = false;
    std::string precond_s = "esif";
    idx rank = 5, oversample = 8;
    int levels = -1;
    idx leaf = 5;
    std::uint64_t seed = 7;
    double tol = 1e-12;
    idx max_iter = 5000;
    std::string compression_s = "randomized";
    std::string diag_s = "none";
    idx diag_cap = 4096;
    bool timing = false;
    std::string csv_path, json_path, history_path;

    app.add_option("--problem", problem_label_s,
                   "problem: example1 | rbf:<gaussian|sech|inverse_multiquadric|"
                   "inverse_quadratic> | gauss3d | mm:<path>");
    app.add_option("--n", n, "problem size (ignored for mm: inputs)");
    app.add_option("--eps", eps, "kernel shape parameter for rbf problems");
    app.add_option("--s", s_reg, "diagonal regularization for gauss3d");
    app.add_option("--mu", mu, "kernel width for gauss3d");
    app.add_option("--box", box, "gauss3d box extents (3 values)")->expected(3);
    app.add_option("--cloud-seed", cloud_seed, "gauss3d point-cloud seed");
    app.add_flag("--squared-distance", squared,
                 "gauss3d: use squared distance in the kernel argument");
    app.add_option("--precond", precond_s, "preconditioner: esif|sif|bdiag|none");
    app.add_option("--rank", rank, "truncation rank r");
    app.add_option("--oversample", oversample, "sketch oversampling");
    app.add_option("--levels", levels, "partition levels (default: from --leaf)");
    app.add_option("--leaf", leaf, "target leaf block size when deriving levels");
    auto* seed_opt = app.add_option("--seed", seed, "compression seed");
    seed_opt->envname("ESIF_SEED");
    app.add_option("--tol", tol, "PCG relative-residual tolerance");
    app.add_option("--max-iter", max_iter, "PCG iteration cap");
    app.add_option("--compression", compression_s,
                   "low-rank compression: randomized|explicit");
    double sigma_cap = std::numeric_limits<double>::quiet_NaN();
    app.add_option("--sigma-cap", sigma_cap,
                   "stabilization cap on kept sigmas for --precond sif "
                   "(default: library constant)")
        ->check(CLI::Range(1e-3, 1.0));
    app.add_option("--diagnostics", diag_s,
                   "spectral diagnostics: none|prec|full (full adds kappa(A))");
    app.add_option("--diag-cap", diag_cap, "max n for spectral diagnostics");
    app.add_flag("--timing", timing, "include wall-clock columns in outputs");
    app.add_option("--csv", csv_path, "write row(s) as RFC-4180 CSV");
    app.add_option("--json", json_path, "write row(s) as JSON");
    app.add_option("--history", history_path,
                   "write per-iteration residual history CSV");

    CLI::App* table = app.add_subcommand(
        "table", "run a sweep of cells (preset grid or JSON sweep file)");
    std::string preset, sweep_path;
    std::vector<idx> sizes = {1280, 2560, 5120};
    std::uint64_t t_seed = 7;
    std::string t_diag = "none";
    bool t_timing = false;
    std::string t_csv, t_json, t_history;
    table->add_option("--preset", preset, "preset grid: scaling|kernels|ranks");
    table->add_option("--sweep", sweep_path, "JSON sweep file (base + runs)");
    table->add_option("--sizes", sizes, "sizes for the scaling preset");
    auto* t_seed_opt = table->add_option("--seed", t_seed, "compression seed");
    t_seed_opt->envname("ESIF_SEED");
    table->add_option("--diagnostics", t_diag, "diagnostics level for all cells");
    auto* t_maxit = table->add_option("--max-iter", max_iter,
                                      "override PCG iteration cap for all cells");
    auto* t_tol = table->add_option("--tol", tol,
                                    "override PCG tolerance for all cells");
    table->add_flag("--timing", t_timing, "include wall-clock columns");
    table->add_option("--csv", t_csv, "write the table as CSV");
    table->add_option("--json", t_json, "write the table as JSON");
    table->add_option("--history", t_history, "write residual histories CSV");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run randomized property suites");
    std::vector<std::string> suites = {"all"};
    std::uint64_t v_seed = 7;
    verify_cmd->add_option(
        "--suite", suites,
        "suites: one-level-spectrum|one-level-error|kappa-formulas|"
        "multilevel-spd|multilevel-bounds|cost-model|all");
    auto* v_seed_opt = verify_cmd->add_option("--seed", v_seed, "corpus seed");
    v_seed_opt->envname("ESIF_SEED");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify_cmd->parsed()) return cmd_verify(suites, v_seed);

        if (table->parsed()) {
            if (preset.empty() == sweep_path.empty())
                throw ConfigError("table needs exactly one of --preset/--sweep");
            std::vector<BenchConfig> cells;
            const DiagLevel dl = parse_diag(t_diag);
            if (!preset.empty()) {
                if (preset == "scaling")
                    cells = preset_scaling(sizes, t_seed, dl);
                else if (preset == "kernels")
                    cells = preset_kernels(t_seed, dl);
                else if (preset == "ranks")
                    cells = preset_ranks(t_seed, dl);
                else
                    throw ConfigError("unknown preset '" + preset + "'");
            } else {
                cells = sweep_from_file(sweep_path);
                if (t_seed_opt->count() > 0)
                    for (BenchConfig& c : cells) c.seed = t_seed;
                if (table->count("--diagnostics") > 0)
                    for (BenchConfig& c : cells) c.diagnostics = dl;
            }
            if (t_maxit->count() > 0)
                for (BenchConfig& c : cells) c.max_iter = max_iter;
            if (t_tol->count() > 0)
                for (BenchConfig& c : cells) c.tol = tol;
            const std::vector<BenchRow> rows = run_table(cells);
            bool any_error = false;
            for (const BenchRow& r : rows) {
                if (!r.error.empty()) {
                    any_error = true;
                    std::printf("%-52s ERROR: %s\n", r.run_id.c_str(),
                                r.error.c_str());
                } else {
                    std::printf("%-52s iter=%5zu conv=%s relres=%.3e\n",
                                r.run_id.c_str(), r.iterations,
                                r.converged ? "yes" : "no ", r.relres);
                }
            }
            write_outputs(rows, t_csv, t_json, t_history, t_timing);
            std::printf("table: %zu cells, %s\n", rows.size(),
                        any_error ? "with failures" : "all completed");
            return any_error ? 3 : 0;
        }

        // Single run (top-level flags).
        if (problem_label_s.empty()) {
            std::cerr << "error: --problem is required (see --help)\n";
            return 2;
        }
        BenchConfig cfg;
        cfg.problem = build_problem(problem_label_s, n, eps, s_reg, mu, box,
                                    cloud_seed, squared);
        cfg.precond = parse_precond(precond_s);
        cfg.rank = rank;
        cfg.oversample = oversample;
        cfg.levels = levels;
        cfg.leaf_size = leaf;
        cfg.seed = seed;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        cfg.compression = parse_compression(compression_s);
        cfg.diagnostics = parse_diag(diag_s);
        cfg.diag_cap = diag_cap;
        cfg.timing = timing;
        cfg.sigma_cap = sigma_cap;
        const BenchRow row = run_bench(cfg);
        print_row(row);
        write_outputs({row}, csv_path, json_path, history_path, timing);
        if (!row.converged)
            std::printf("note: PCG did not reach tol within max_iter\n");
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const FileFormatError& e) {
        std::cerr << "file error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionMismatch& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const RankTooLarge& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const SizeCapExceeded& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
