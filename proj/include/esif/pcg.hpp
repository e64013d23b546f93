#pragma once

#include <cstddef>
#include <vector>

#include "esif/errors.hpp"
#include "esif/flops.hpp"
#include "esif/matrix.hpp"

namespace esif {

struct PcgConfig {
    double tol = 1e-12;  ///< on the true relative residual ||Ax-b|| / ||b||
    idx max_iter = 5000;
};

struct PcgReport {
    idx iterations = 0;
    bool converged = false;
    double final_relres = 0.0;
    std::vector<double> history;  ///< true relative residual after each iteration
    FlopCounter solve_flops;      ///< work the solver itself required
    FlopCounter telemetry_flops;  ///< extra work for the true-residual telemetry
};

/// Pass-through preconditioner (plain CG).  The dimension is only needed
/// when the identity is fed through the spectral diagnostics.
struct IdentityPrecond {
    idx n = 0;
    idx dim() const { return n; }
    Vector apply_inv(std::span<const double> x) const {
        return Vector(x.begin(), x.end());
    }
    Vector apply_inv_t(std::span<const double> x) const {
        return Vector(x.begin(), x.end());
    }
    void apply_inv_block(Matrix&) const {}
    void apply_inv_t_block(Matrix&) const {}
};

/// Preconditioned conjugate gradient with a split preconditioner
/// M^{-1} = Ltilde^{-T} Ltilde^{-1} supplied via apply_inv/apply_inv_t.
///
/// Convergence is decided on the true residual: after every update the
/// solver recomputes gamma = ||A x - b|| / ||b|| from scratch.  That extra
/// matvec is telemetry, not part of the algorithm, and is accounted
/// separately so cost reports reflect the mandatory work only.
template <class Precond>
PcgReport pcg(const Matrix& a, const Vector& b, const Precond& m,
              const PcgConfig& cfg, Vector& x) {
    const idx n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw DimensionMismatch("pcg: shape mismatch");

    PcgReport rep;
    const FlopTally solve_tally;
    FlopCounter telemetry;

    x.assign(n, 0.0);
    Vector r = b; // r = b - A*0
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        rep.converged = true;
        rep.solve_flops = solve_tally.delta();
        return rep;
    }

    Vector z = m.apply_inv_t(m.apply_inv(r));
    Vector p = z;
    double rz = dot(r, z);
    Vector q(n);

    for (idx k = 0; k < cfg.max_iter; ++k) {
        matvec(whole(a), p, q);
        const double pq = dot(p, q);
        if (pq <= 0.0) {
            // loss of positive definiteness in the preconditioned operator
            break;
        }
        const double alpha = rz / pq;
        detail::count_div();
        axpy(alpha, p, x);
        axpy(-alpha, q, r);

        // telemetry: true residual, recomputed from scratch
        double gamma;
        {
            const FlopTally t;
            Vector ax = matvec(a, x);
            for (idx i = 0; i < n; ++i) ax[i] -= b[i];
            detail::count_add(n);
            gamma = norm2(ax) / bnorm;
            detail::count_div();
            telemetry += t.delta();
        }
        rep.history.push_back(gamma);
        rep.final_relres = gamma;
        rep.iterations = k + 1;
        if (gamma <= cfg.tol) {
            rep.converged = true;
            break;
        }

        z = m.apply_inv_t(m.apply_inv(r));
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        detail::count_div();
        rz = rz_new;
        for (idx i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        detail::count_mult(n);
        detail::count_add(n);
    }

    rep.telemetry_flops = telemetry;
    rep.solve_flops = solve_tally.delta() - telemetry;
    return rep;
}

} // namespace esif
