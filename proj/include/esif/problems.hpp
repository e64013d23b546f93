#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>

#include "esif/errors.hpp"
#include "esif/matrix.hpp"
#include "esif/matrix_market.hpp"
#include "esif/rng.hpp"

namespace esif {

/// The four radial basis function kernels, phi(t) with t = eps-scaled
/// distance: gaussian exp(-eps^2 t^2), sech(eps t),
/// inverse_multiquadric 1/sqrt(1+eps^2 t^2), inverse_quadratic 1/(1+eps^2 t^2).
enum class RbfKind { gaussian, sech, inverse_multiquadric, inverse_quadratic };

inline const char* rbf_name(RbfKind k) {
    switch (k) {
        case RbfKind::gaussian: return "gaussian";
        case RbfKind::sech: return "sech";
        case RbfKind::inverse_multiquadric: return "inverse_multiquadric";
        case RbfKind::inverse_quadratic: return "inverse_quadratic";
    }
    return "?";
}

enum class ProblemKind { example1, rbf, gaussian_kernel, matrix_market };

struct ProblemSpec {
    ProblemKind kind = ProblemKind::example1;
    idx n = 0; ///< ignored for matrix_market (file decides)
    // rbf
    RbfKind rbf = RbfKind::gaussian;
    double eps = 0.4;
    // gaussian_kernel
    double s = 1e-9;
    double mu = 2.5;
    std::array<double, 3> box{100.0, 5.0, 5.0};
    std::uint64_t cloud_seed = 1;
    bool squared_distance = false; ///< conventional exp(-d^2/(2 mu^2)) variant
    // matrix_market
    std::string path;
};

/// A_ij = (ij)^{1/4} pi / (20 + 0.8 (i-j)^2) with 1-based indices.
inline Matrix gen_example1(idx n) {
    if (n < 2) throw ConfigError("gen_example1: N must be >= 2");
    Matrix a(n, n);
    for (idx j = 0; j < n; ++j) {
        const double fj = static_cast<double>(j + 1);
        for (idx i = j; i < n; ++i) {
            const double fi = static_cast<double>(i + 1);
            const double d = fi - fj;
            const double v = std::sqrt(std::sqrt(fi * fj)) * std::numbers::pi /
                             (20.0 + 0.8 * d * d);
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    return a;
}

/// RBF interpolation matrix on the grid points 0, 1, ..., N-1:
/// A_ij = phi(|i-j|).  Toeplitz and unit-diagonal by construction.
inline Matrix gen_rbf(RbfKind kind, double eps, idx n) {
    if (n < 2) throw ConfigError("gen_rbf: N must be >= 2");
    if (!(eps > 0.0)) throw ConfigError("gen_rbf: shape parameter must be > 0");
    Vector phi(n);
    for (idx d = 0; d < n; ++d) {
        const double t = static_cast<double>(d);
        const double et = eps * t;
        switch (kind) {
            case RbfKind::gaussian: phi[d] = std::exp(-et * et); break;
            case RbfKind::sech: phi[d] = 1.0 / std::cosh(et); break;
            case RbfKind::inverse_multiquadric:
                phi[d] = 1.0 / std::sqrt(1.0 + et * et);
                break;
            case RbfKind::inverse_quadratic:
                phi[d] = 1.0 / (1.0 + et * et);
                break;
        }
    }
    Matrix a(n, n);
    for (idx j = 0; j < n; ++j)
        for (idx i = 0; i < n; ++i)
            a(i, j) = phi[i >= j ? i - j : j - i];
    return a;
}

/// Gaussian-kernel matrix sI + G with G_ij = exp(-||t_i - t_j||_2 / (2 mu^2))
/// over a seeded uniform point cloud in an axis-aligned box (default
/// 100 x 5 x 5).  The exponent uses the plain 2-norm distance; set
/// `squared_distance` for the conventional squared-exponential variant.
inline Matrix gen_gaussian_kernel(idx n, double s, double mu,
                                  const std::array<double, 3>& box,
                                  std::uint64_t seed,
                                  bool squared_distance = false) {
    if (n < 2) throw ConfigError("gen_gaussian_kernel: N must be >= 2");
    if (!(mu > 0.0)) throw ConfigError("gen_gaussian_kernel: mu must be > 0");
    if (s < 0.0) throw ConfigError("gen_gaussian_kernel: s must be >= 0");
    Matrix pts(3, n);
    for (idx i = 0; i < n; ++i)
        for (idx c = 0; c < 3; ++c)
            pts(c, i) = box[c] * uniform_at(seed, 3 * i + c);

    const double denom = 2.0 * mu * mu;
    Matrix a(n, n);
    for (idx j = 0; j < n; ++j) {
        a(j, j) = s + 1.0;
        for (idx i = j + 1; i < n; ++i) {
            const double dx = pts(0, i) - pts(0, j);
            const double dy = pts(1, i) - pts(1, j);
            const double dz = pts(2, i) - pts(2, j);
            const double d2 = dx * dx + dy * dy + dz * dz;
            const double arg = squared_distance ? d2 : std::sqrt(d2);
            const double v = std::exp(-arg / denom);
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    return a;
}

/// b = A * ones (right-hand side for the all-ones exact solution).
inline Vector rhs_ones(const Matrix& a) {
    const Vector ones(a.cols(), 1.0);
    return matvec(a, ones);
}

/// Instantiate a problem spec as a dense SPD matrix.
inline Matrix generate(const ProblemSpec& spec) {
    switch (spec.kind) {
        case ProblemKind::example1: return gen_example1(spec.n);
        case ProblemKind::rbf: return gen_rbf(spec.rbf, spec.eps, spec.n);
        case ProblemKind::gaussian_kernel:
            return gen_gaussian_kernel(spec.n, spec.s, spec.mu, spec.box,
                                       spec.cloud_seed, spec.squared_distance);
        case ProblemKind::matrix_market: return read_matrix_market(spec.path);
    }
    throw ConfigError("generate: unknown problem kind");
}

/// Short deterministic label used in CSV rows and run ids.
inline std::string problem_label(const ProblemSpec& spec) {
    char buf[160];
    switch (spec.kind) {
        case ProblemKind::example1: return "example1";
        case ProblemKind::rbf:
            std::snprintf(buf, sizeof buf, "rbf:%s:eps=%g", rbf_name(spec.rbf),
                          spec.eps);
            return buf;
        case ProblemKind::gaussian_kernel:
            std::snprintf(buf, sizeof buf, "gauss3d:s=%g:mu=%g", spec.s, spec.mu);
            return buf;
        case ProblemKind::matrix_market: {
            // strip directories for the label
            const auto pos = spec.path.find_last_of("/\\");
            return "mm:" + (pos == std::string::npos ? spec.path
                                                     : spec.path.substr(pos + 1));
        }
    }
    return "?";
}

} // namespace esif
