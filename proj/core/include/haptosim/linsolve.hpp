#pragma once

#include <cmath>
#include <cstddef>

#include "haptosim/errors.hpp"
#include "haptosim/grid.hpp"

namespace haptosim {

/// Scratch vectors for conjugate gradient, reused across solves.
struct CgWorkspace {
    Field r, p, ap;
    explicit CgWorkspace(const Grid2D& g) : r(g), p(g), ap(g) {}
};

/// Matrix-free CG for SPD operators under the cell-sum inner product.
/// x holds the warm start on entry and the solution on exit; if the initial
/// residual already meets rel_tol * |b|, x is returned untouched (this keeps
/// exact fixed points exactly fixed). Returns the iteration count; throws
/// LinearSolveFailure past max_iter.
template <class ApplyOp>
int conjugate_gradient(ApplyOp&& apply, const Field& b, Field& x,
                       double rel_tol, int max_iter, CgWorkspace& ws,
                       const char* context = "cg") {
    const std::size_t n = b.size();
    double bnorm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) bnorm2 += b[k] * b[k];
    if (bnorm2 == 0.0) {
        for (std::size_t k = 0; k < n; ++k) x[k] = 0.0;
        return 0;
    }
    const double tol2 = rel_tol * rel_tol * bnorm2;

    apply(x, ws.ap);
    double rr = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double rk = b[k] - ws.ap[k];
        ws.r[k] = rk;
        ws.p[k] = rk;
        rr += rk * rk;
    }
    if (rr <= tol2) return 0;

    for (int it = 1; it <= max_iter; ++it) {
        apply(ws.p, ws.ap);
        double pap = 0.0;
        for (std::size_t k = 0; k < n; ++k) pap += ws.p[k] * ws.ap[k];
        if (pap <= 0.0)
            throw LinearSolveFailure(std::string(context) + ": operator not positive definite");
        const double alpha = rr / pap;
        double rr_new = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * ws.p[k];
            const double rk = ws.r[k] - alpha * ws.ap[k];
            ws.r[k] = rk;
            rr_new += rk * rk;
        }
        if (rr_new <= tol2) return it;
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t k = 0; k < n; ++k) ws.p[k] = ws.r[k] + beta * ws.p[k];
    }
    throw LinearSolveFailure(std::string(context) + ": no convergence within iteration cap");
}

} // namespace haptosim
