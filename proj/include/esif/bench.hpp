#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "esif/baselines.hpp"
#include "esif/diagnostics.hpp"
#include "esif/errors.hpp"
#include "esif/esif_factor.hpp"
#include "esif/flops.hpp"
#include "esif/matrix.hpp"
#include "esif/partition.hpp"
#include "esif/pcg.hpp"
#include "esif/problems.hpp"

namespace esif {

enum class PrecondKind { esif, sif, bdiag, none };
enum class DiagLevel { none, prec, full };

inline const char* precond_name(PrecondKind k) {
    switch (k) {
    case PrecondKind::esif: return "esif";
    case PrecondKind::sif: return "sif";
    case PrecondKind::bdiag: return "bdiag";
    case PrecondKind::none: return "none";
    }
    return "?";
}

inline PrecondKind parse_precond(const std::string& s) {
    if (s == "esif") return PrecondKind::esif;
    if (s == "sif") return PrecondKind::sif;
    if (s == "bdiag") return PrecondKind::bdiag;
    if (s == "none") return PrecondKind::none;
    throw ConfigError("unknown preconditioner '" + s + "'");
}

inline RbfKind parse_rbf(const std::string& s) {
    if (s == "gaussian") return RbfKind::gaussian;
    if (s == "sech") return RbfKind::sech;
    if (s == "imq" || s == "inverse_multiquadric")
        return RbfKind::inverse_multiquadric;
    if (s == "iq" || s == "inverse_quadratic") return RbfKind::inverse_quadratic;
    throw ConfigError("unknown kernel '" + s + "'");
}

inline CompressionKind parse_compression(const std::string& s) {
    if (s == "randomized") return CompressionKind::randomized;
    if (s == "explicit") return CompressionKind::explicit_svd;
    throw ConfigError("unknown compression mode '" + s + "'");
}

inline DiagLevel parse_diag(const std::string& s) {
    if (s == "none") return DiagLevel::none;
    if (s == "prec") return DiagLevel::prec;
    if (s == "full") return DiagLevel::full;
    throw ConfigError("unknown diagnostics level '" + s + "'");
}

inline const char* diag_name(DiagLevel d) {
    switch (d) {
    case DiagLevel::none: return "none";
    case DiagLevel::prec: return "prec";
    case DiagLevel::full: return "full";
    }
    return "?";
}

/// One benchmark cell: problem, preconditioner, and solver settings.
struct BenchConfig {
    ProblemSpec problem;
    PrecondKind precond = PrecondKind::esif;
    idx rank = 5;
    idx oversample = 8;
    int levels = -1; ///< -1 derives levels from leaf_size
    idx leaf_size = 5;
    std::uint64_t seed = 7;
    double tol = 1e-12;
    idx max_iter = 5000;
    CompressionKind compression = CompressionKind::randomized;
    DiagLevel diagnostics = DiagLevel::none;
    idx diag_cap = 4096;
    bool timing = false; ///< serialize wall-clock columns (non-deterministic)
    /// Stabilization cap for the baseline factor; NaN keeps the library
    /// default (kSifSigmaCap).  Ignored by the other preconditioners.
    double sigma_cap = std::numeric_limits<double>::quiet_NaN();
};

/// Result of one benchmark cell.  NaN marks fields that were not computed.
struct BenchRow {
    std::string run_id;
    std::string problem;
    std::string precond;
    idx n = 0;
    int levels = 0;
    idx rank = 0;
    idx oversample = 0;
    std::uint64_t seed = 0;
    std::string compression;
    double tol = 0.0;
    idx max_iter = 0;
    idx iterations = 0;
    bool converged = false;
    double relres = std::numeric_limits<double>::quiet_NaN();
    double kappa_a = std::numeric_limits<double>::quiet_NaN();
    double kappa_prec = std::numeric_limits<double>::quiet_NaN();
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    double tau = std::numeric_limits<double>::quiet_NaN();
    bool tau_exact = false;
    std::uint64_t build_flops = 0;
    std::uint64_t apply_flops = 0; ///< one apply_inv + apply_inv_t pass
    std::uint64_t solve_flops = 0;
    std::uint64_t telemetry_flops = 0;
    idx storage = 0;
    idx clamp_events = 0;
    idx stabilized = 0; ///< baseline-only: kept sigmas lowered to the cap
    std::string error;  ///< non-empty when the cell failed
    double build_ms = std::numeric_limits<double>::quiet_NaN();
    double solve_ms = std::numeric_limits<double>::quiet_NaN();
    Vector history; ///< true relative residual per iteration
};

namespace detail {

inline std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    const auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration<double, std::milli>(dt).count();
}

} // namespace detail

inline std::string make_run_id(const BenchConfig& cfg, idx n, int levels) {
    std::string id = problem_label(cfg.problem);
    for (char& c : id)
        if (c == ':' || c == '=' || c == '/') c = '_';
    id += "_n" + std::to_string(n);
    id += "_";
    id += precond_name(cfg.precond);
    if (cfg.precond == PrecondKind::esif || cfg.precond == PrecondKind::sif) {
        id += "_r" + std::to_string(cfg.rank);
        id += "_os" + std::to_string(cfg.oversample);
        if (cfg.compression == CompressionKind::explicit_svd) id += "_x";
    }
    id += "_l" + std::to_string(levels);
    id += "_s" + std::to_string(cfg.seed);
    return id;
}

/// Run one cell against a pre-generated matrix (shared across cells).
inline BenchRow run_bench(const BenchConfig& cfg, const Matrix& a) {
    const idx n = a.rows();
    const int levels =
        cfg.levels >= 0 ? cfg.levels : levels_for(n, cfg.leaf_size);
    BenchRow row;
    row.run_id = make_run_id(cfg, n, levels);
    row.problem = problem_label(cfg.problem);
    row.precond = precond_name(cfg.precond);
    row.n = n;
    row.levels = levels;
    row.rank = cfg.rank;
    row.oversample = cfg.oversample;
    row.seed = cfg.seed;
    row.compression = cfg.compression == CompressionKind::explicit_svd
                          ? "explicit"
                          : "randomized";
    row.tol = cfg.tol;
    row.max_iter = cfg.max_iter;

    const PartitionPlan plan = PartitionPlan::bisect(n, levels);
    const Vector b = rhs_ones(a);
    const PcgConfig pcfg{cfg.tol, cfg.max_iter};

    FactorOptions fopt;
    fopt.rank = cfg.rank;
    fopt.oversample = cfg.oversample;
    fopt.seed = cfg.seed;
    fopt.compression = cfg.compression;
    if (!std::isnan(cfg.sigma_cap)) fopt.sif_sigma_cap = cfg.sigma_cap;

    const auto probe_apply = [&](const auto& f) {
        FlopTally tally;
        Vector x(n, 1.0);
        Vector y = f.apply_inv(x);
        Vector z = f.apply_inv_t(y);
        (void)z;
        return tally.delta().total();
    };

    const auto run_with = [&](const auto& f) {
        row.apply_flops = probe_apply(f);
        Vector x;
        const auto t0 = std::chrono::steady_clock::now();
        const PcgReport rep = pcg(a, b, f, pcfg, x);
        row.solve_ms = detail::elapsed_ms(t0);
        row.iterations = rep.iterations;
        row.converged = rep.converged;
        row.relres = rep.final_relres;
        row.solve_flops = rep.solve_flops.total();
        row.telemetry_flops = rep.telemetry_flops.total();
        row.history.assign(rep.history.begin(), rep.history.end());
    };

    const auto diagnose = [&](const auto& f, double tau, int lv) {
        if (cfg.diagnostics == DiagLevel::none) return;
        if (n > cfg.diag_cap)
            throw SizeCapExceeded("diagnostics request exceeds diag_cap (n=" +
                                  std::to_string(n) + ")");
        SpectrumOptions so;
        so.cap = cfg.diag_cap;
        so.kappa_a = cfg.diagnostics == DiagLevel::full;
        so.tau = tau;
        so.levels = lv;
        const SpectrumReport rep = spectrum(a, f, so);
        row.kappa_prec = rep.kappa_prec;
        row.kappa_a = rep.kappa_a;
        row.epsilon = rep.epsilon;
    };

    switch (cfg.precond) {
    case PrecondKind::esif: {
        const auto t0 = std::chrono::steady_clock::now();
        const EsifFactor f = EsifFactor::build(a, plan, fopt);
        row.build_ms = detail::elapsed_ms(t0);
        row.build_flops = f.build_flops().total();
        row.storage = f.storage_report().total;
        row.clamp_events = f.clamp_count();
        row.tau = f.tau();
        row.tau_exact = f.tau_exact();
        run_with(f);
        diagnose(f, f.tau(), levels);
        break;
    }
    case PrecondKind::sif: {
        const auto t0 = std::chrono::steady_clock::now();
        const SifFactor f = SifFactor::build(a, plan, fopt);
        row.build_ms = detail::elapsed_ms(t0);
        row.build_flops = f.build_flops().total();
        row.storage = f.storage_report().total;
        row.clamp_events = f.breakdown_count();
        row.stabilized = f.stabilized_count();
        row.tau = f.tau();
        row.tau_exact = f.tau_exact();
        run_with(f);
        diagnose(f, f.tau(), levels);
        break;
    }
    case PrecondKind::bdiag: {
        const auto t0 = std::chrono::steady_clock::now();
        const BdiagFactor f = BdiagFactor::build(a, plan);
        row.build_ms = detail::elapsed_ms(t0);
        row.build_flops = f.build_flops().total();
        row.storage = f.storage_report().total;
        row.tau = 0.0;
        row.tau_exact = true;
        run_with(f);
        diagnose(f, 0.0, 0);
        break;
    }
    case PrecondKind::none: {
        const IdentityPrecond f{n};
        row.build_ms = 0.0;
        run_with(f);
        if (cfg.diagnostics != DiagLevel::none) diagnose(f, 0.0, 0);
        break;
    }
    }
    return row;
}

/// Run one cell, generating the problem matrix from the config.
inline BenchRow run_bench(const BenchConfig& cfg) {
    const Matrix a = generate(cfg.problem);
    return run_bench(cfg, a);
}

/// Run a sweep, continuing past per-cell failures; failed cells carry the
/// error message in their row and zeroed numeric results.
inline std::vector<BenchRow> run_table(const std::vector<BenchConfig>& cells) {
    std::vector<BenchRow> rows;
    rows.reserve(cells.size());
    // Generated matrices are reused across consecutive cells that share a
    // problem spec (the common case in table presets).
    Matrix cached;
    std::string cached_label;
    for (const BenchConfig& cfg : cells) {
        const std::string label = problem_label(cfg.problem);
        BenchRow row;
        try {
            if (cfg.problem.kind != ProblemKind::matrix_market &&
                label == cached_label && cached.rows() == cfg.problem.n) {
                row = run_bench(cfg, cached);
            } else {
                cached = generate(cfg.problem);
                cached_label = label;
                row = run_bench(cfg, cached);
            }
        } catch (const std::exception& e) {
            row = BenchRow{};
            row.run_id = make_run_id(cfg, cfg.problem.n,
                                     cfg.levels >= 0 ? cfg.levels : -1);
            row.problem = label;
            row.precond = precond_name(cfg.precond);
            row.n = cfg.problem.n;
            row.rank = cfg.rank;
            row.seed = cfg.seed;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// --------------------------------------------------------------------------
// Serialization.  CSV is RFC-4180: CRLF line endings, '.' decimal separator,
// doubles at 17 significant digits, NaN fields left empty.  Reruns with the
// same configuration produce bitwise-identical files (timing columns are
// opt-in because wall time is inherently non-deterministic).
// --------------------------------------------------------------------------

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline std::string csv_double(double v) {
    if (std::isnan(v)) return "";
    return fmt_g17(v);
}

} // namespace detail

inline std::string csv_header(bool timing) {
    std::string h =
        "run_id,problem,precond,n,levels,rank,oversample,seed,compression,"
        "tol,max_iter,iterations,converged,relres,kappa_a,kappa_prec,epsilon,"
        "tau,tau_exact,build_flops,apply_flops,solve_flops,telemetry_flops,"
        "storage,clamp_events,error";
    if (timing) h += ",build_ms,solve_ms";
    return h;
}

inline std::string to_csv(const BenchRow& r, bool timing) {
    using detail::csv_double;
    using detail::csv_escape;
    std::string line;
    line += csv_escape(r.run_id);
    line += ',' + csv_escape(r.problem);
    line += ',' + csv_escape(r.precond);
    line += ',' + std::to_string(r.n);
    line += ',' + std::to_string(r.levels);
    line += ',' + std::to_string(r.rank);
    line += ',' + std::to_string(r.oversample);
    line += ',' + std::to_string(r.seed);
    line += ',' + r.compression;
    line += ',' + csv_double(r.tol);
    line += ',' + std::to_string(r.max_iter);
    line += ',' + std::to_string(r.iterations);
    line += r.converged ? ",true" : ",false";
    line += ',' + csv_double(r.relres);
    line += ',' + csv_double(r.kappa_a);
    line += ',' + csv_double(r.kappa_prec);
    line += ',' + csv_double(r.epsilon);
    line += ',' + csv_double(r.tau);
    line += r.tau_exact ? ",true" : ",false";
    line += ',' + std::to_string(r.build_flops);
    line += ',' + std::to_string(r.apply_flops);
    line += ',' + std::to_string(r.solve_flops);
    line += ',' + std::to_string(r.telemetry_flops);
    line += ',' + std::to_string(r.storage);
    line += ',' + std::to_string(r.clamp_events);
    line += ',' + csv_escape(r.error);
    if (timing) {
        line += ',' + csv_double(r.build_ms);
        line += ',' + csv_double(r.solve_ms);
    }
    return line;
}

inline void write_csv(const std::string& path, const std::vector<BenchRow>& rows,
                      bool timing) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileFormatError("cannot open '" + path + "' for writing");
    out << csv_header(timing) << "\r\n";
    for (const BenchRow& r : rows) out << to_csv(r, timing) << "\r\n";
}

inline void write_history_csv(const std::string& path,
                              const std::vector<BenchRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileFormatError("cannot open '" + path + "' for writing");
    out << "run_id,iteration,relres\r\n";
    for (const BenchRow& r : rows)
        for (idx i = 0; i < r.history.size(); ++i)
            out << detail::csv_escape(r.run_id) << ',' << (i + 1) << ','
                << detail::fmt_g17(r.history[i]) << "\r\n";
}

inline nlohmann::json to_json(const BenchRow& r, bool timing) {
    const auto num = [](double v) {
        return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
    };
    nlohmann::json j{{"run_id", r.run_id},
                     {"problem", r.problem},
                     {"precond", r.precond},
                     {"n", r.n},
                     {"levels", r.levels},
                     {"rank", r.rank},
                     {"oversample", r.oversample},
                     {"seed", r.seed},
                     {"compression", r.compression},
                     {"tol", r.tol},
                     {"max_iter", r.max_iter},
                     {"iterations", r.iterations},
                     {"converged", r.converged},
                     {"relres", num(r.relres)},
                     {"kappa_a", num(r.kappa_a)},
                     {"kappa_prec", num(r.kappa_prec)},
                     {"epsilon", num(r.epsilon)},
                     {"tau", num(r.tau)},
                     {"tau_exact", r.tau_exact},
                     {"build_flops", r.build_flops},
                     {"apply_flops", r.apply_flops},
                     {"solve_flops", r.solve_flops},
                     {"telemetry_flops", r.telemetry_flops},
                     {"storage", r.storage},
                     {"clamp_events", r.clamp_events},
                     {"error", r.error}};
    if (timing) {
        j["build_ms"] = num(r.build_ms);
        j["solve_ms"] = num(r.solve_ms);
    }
    return j;
}

inline void write_json(const std::string& path,
                       const std::vector<BenchRow>& rows, bool timing) {
    nlohmann::json arr = nlohmann::json::array();
    for (const BenchRow& r : rows) arr.push_back(to_json(r, timing));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileFormatError("cannot open '" + path + "' for writing");
    out << arr.dump(2) << "\n";
}

// --------------------------------------------------------------------------
// Sweep configs: JSON file with a "base" object and a "runs" array of
// overrides.  Unknown keys are rejected to catch typos early.
// --------------------------------------------------------------------------

namespace detail {

inline void apply_config_key(BenchConfig& cfg, const std::string& key,
                             const nlohmann::json& v) {
    if (key == "problem") {
        if (!v.is_object()) throw ConfigError("'problem' must be an object");
        for (const auto& [pk, pv] : v.items()) {
            if (pk == "kind") {
                const std::string s = pv.get<std::string>();
                if (s == "example1") cfg.problem.kind = ProblemKind::example1;
                else if (s == "rbf") cfg.problem.kind = ProblemKind::rbf;
                else if (s == "gauss3d")
                    cfg.problem.kind = ProblemKind::gaussian_kernel;
                else if (s == "mm")
                    cfg.problem.kind = ProblemKind::matrix_market;
                else throw ConfigError("unknown problem kind '" + s + "'");
            } else if (pk == "n") cfg.problem.n = pv.get<idx>();
            else if (pk == "rbf") cfg.problem.rbf = parse_rbf(pv.get<std::string>());
            else if (pk == "eps") cfg.problem.eps = pv.get<double>();
            else if (pk == "s") cfg.problem.s = pv.get<double>();
            else if (pk == "mu") cfg.problem.mu = pv.get<double>();
            else if (pk == "box") {
                if (!pv.is_array() || pv.size() != 3)
                    throw ConfigError("'box' must be an array of 3 numbers");
                for (int c = 0; c < 3; ++c) cfg.problem.box[c] = pv[c].get<double>();
            } else if (pk == "cloud_seed")
                cfg.problem.cloud_seed = pv.get<std::uint64_t>();
            else if (pk == "squared_distance")
                cfg.problem.squared_distance = pv.get<bool>();
            else if (pk == "path") cfg.problem.path = pv.get<std::string>();
            else throw ConfigError("unknown problem key '" + pk + "'");
        }
    } else if (key == "precond") cfg.precond = parse_precond(v.get<std::string>());
    else if (key == "rank") cfg.rank = v.get<idx>();
    else if (key == "oversample") cfg.oversample = v.get<idx>();
    else if (key == "levels") cfg.levels = v.get<int>();
    else if (key == "leaf_size") cfg.leaf_size = v.get<idx>();
    else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
    else if (key == "tol") cfg.tol = v.get<double>();
    else if (key == "max_iter") cfg.max_iter = v.get<idx>();
    else if (key == "compression")
        cfg.compression = parse_compression(v.get<std::string>());
    else if (key == "diagnostics") cfg.diagnostics = parse_diag(v.get<std::string>());
    else if (key == "diag_cap") cfg.diag_cap = v.get<idx>();
    else if (key == "sigma_cap") cfg.sigma_cap = v.get<double>();
    else if (key == "timing") cfg.timing = v.get<bool>();
    else throw ConfigError("unknown config key '" + key + "'");
}

inline BenchConfig config_from_json(const nlohmann::json& j, BenchConfig base) {
    if (!j.is_object()) throw ConfigError("run entry must be a JSON object");
    for (const auto& [key, v] : j.items()) apply_config_key(base, key, v);
    return base;
}

} // namespace detail

inline std::vector<BenchConfig> sweep_from_json(const nlohmann::json& root) {
    if (!root.is_object())
        throw ConfigError("sweep file must hold a JSON object");
    BenchConfig base;
    if (root.contains("base"))
        base = detail::config_from_json(root.at("base"), base);
    std::vector<BenchConfig> cells;
    if (!root.contains("runs") || !root.at("runs").is_array())
        throw ConfigError("sweep file needs a 'runs' array");
    for (const auto& j : root.at("runs"))
        cells.push_back(detail::config_from_json(j, base));
    for (const auto& [key, v] : root.items()) {
        (void)v;
        if (key != "base" && key != "runs")
            throw ConfigError("unknown sweep key '" + key + "'");
    }
    return cells;
}

inline std::vector<BenchConfig> sweep_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileFormatError("cannot open sweep file '" + path + "'");
    nlohmann::json root;
    try {
        in >> root;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("sweep file parse failure: ") + e.what(), 0);
    }
    return sweep_from_json(root);
}

// --------------------------------------------------------------------------
// Table presets mirroring the shipped experiment grids.
// --------------------------------------------------------------------------

/// Scaling study: model problem at several sizes, rank 5, leaf blocks of 5,
/// comparing block-diagonal, baseline, and enhanced preconditioners.
inline std::vector<BenchConfig> preset_scaling(const std::vector<idx>& sizes,
                                               std::uint64_t seed,
                                               DiagLevel diag) {
    std::vector<BenchConfig> cells;
    for (idx n : sizes) {
        for (PrecondKind p :
             {PrecondKind::bdiag, PrecondKind::sif, PrecondKind::esif}) {
            BenchConfig c;
            c.problem.kind = ProblemKind::example1;
            c.problem.n = n;
            c.precond = p;
            c.rank = 5;
            c.leaf_size = 5;
            c.seed = seed;
            c.diagnostics = diag;
            cells.push_back(c);
        }
    }
    return cells;
}

namespace detail {

inline void push_kernel_cells(std::vector<BenchConfig>& cells, RbfKind kind,
                              std::initializer_list<double> eps_list, idx rank,
                              std::uint64_t seed, DiagLevel diag,
                              bool with_bdiag) {
    for (double eps : eps_list) {
        std::vector<PrecondKind> ps;
        if (with_bdiag) ps.push_back(PrecondKind::bdiag);
        ps.push_back(PrecondKind::sif);
        ps.push_back(PrecondKind::esif);
        for (PrecondKind p : ps) {
            BenchConfig c;
            c.problem.kind = ProblemKind::rbf;
            c.problem.n = 1280;
            c.problem.rbf = kind;
            c.problem.eps = eps;
            c.precond = p;
            c.rank = rank;
            c.levels = 8;
            c.seed = seed;
            c.diagnostics = diag;
            cells.push_back(c);
        }
    }
}

} // namespace detail

/// Kernel study at rank 6: four radial kernels, three shape parameters each.
inline std::vector<BenchConfig> preset_kernels(std::uint64_t seed,
                                               DiagLevel diag) {
    std::vector<BenchConfig> cells;
    detail::push_kernel_cells(cells, RbfKind::gaussian, {0.4, 0.36, 0.32}, 6,
                              seed, diag, true);
    detail::push_kernel_cells(cells, RbfKind::sech, {0.3, 0.25, 0.2}, 6, seed,
                              diag, true);
    detail::push_kernel_cells(cells, RbfKind::inverse_multiquadric,
                              {0.3, 0.25, 0.2}, 6, seed, diag, true);
    detail::push_kernel_cells(cells, RbfKind::inverse_quadratic,
                              {0.25, 0.2, 1.0 / 6.0}, 6, seed, diag, true);
    return cells;
}

/// Rank study: harder shape parameters at ranks 4 and 8, baseline vs enhanced.
inline std::vector<BenchConfig> preset_ranks(std::uint64_t seed,
                                             DiagLevel diag) {
    std::vector<BenchConfig> cells;
    for (idx rank : {idx{4}, idx{8}}) {
        detail::push_kernel_cells(cells, RbfKind::gaussian, {0.3, 0.25, 0.2},
                                  rank, seed, diag, false);
        detail::push_kernel_cells(cells, RbfKind::sech, {0.25, 0.2, 1.0 / 6.0},
                                  rank, seed, diag, false);
        detail::push_kernel_cells(cells, RbfKind::inverse_multiquadric,
                                  {0.3, 0.25, 0.2}, rank, seed, diag, false);
        detail::push_kernel_cells(cells, RbfKind::inverse_quadratic,
                                  {0.25, 0.2, 1.0 / 6.0}, rank, seed, diag,
                                  false);
    }
    return cells;
}

} // namespace esif
